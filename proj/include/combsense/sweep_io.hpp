#pragma once

// File formats for delay sweeps, kernel estimates and spectra.
//
// Sweep: CSV (delay_tau0, visibility) plus a JSON sidecar holding SweepMeta.
// Writers return text; callers decide where and how atomically to store it.

#include <filesystem>
#include <string>
#include <string_view>

#include "combsense/spectroscopy.hpp"

namespace combsense {

SweepMeta parse_sweep_meta(std::string_view json_text);
std::string sweep_meta_json(const SweepMeta& meta);

// Rows are kept even when a visibility lies outside (0, 1]; inversion flags them.
DelaySweep parse_sweep(std::string_view csv_text, std::string_view meta_json);
DelaySweep load_sweep(const std::filesystem::path& csv_path,
                      const std::filesystem::path& meta_path);

// Sidecar next to a sweep CSV: "name.csv" -> "name.json".
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

std::string sweep_csv(const DelaySweep& sweep);
std::string kernel_csv(const KernelEstimate& estimate);
std::string spectrum_csv(const SpectrumEstimate& spectrum);

// 1-based line containing byte `offset` of `text`.
std::size_t line_of_offset(std::string_view text, std::size_t offset);

} // namespace combsense
