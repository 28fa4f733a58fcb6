#pragma once

// RunConfig: one JSON document describing a comb-sense run. Every field has a
// default; unknown keys are rejected with the line they appear on.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "combsense/coherence.hpp"
#include "combsense/kernels.hpp"
#include "combsense/oracle.hpp"
#include "combsense/physics.hpp"
#include "combsense/spectroscopy.hpp"

namespace combsense::cli {

struct GridRange {
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 0;
};

struct ReconstructOptions {
    std::string input;        // sweep CSV
    std::string meta;         // JSON sidecar; empty means next to the input
    std::string probe_curve;  // optional probe-only sweep CSV
    bool debias = false;
    Baseline baseline = Baseline::analytic;
    bool normalize = true;
    double calibration_floor = 1.0e-3;
};

struct Fig3Options {
    SweepMeta meta{0.5, 3.0, 3.0, 1.0, 1.0, std::nullopt};
    GridRange delay_tau0{1.0e-3, 1.0e4, 2000};
    double white_sigma_w = 1.0e-3;
    double lorentzian_tau_c = 10.0;
    double one_over_f_tau_f = 0.1;
    double one_over_f_alpha = 0.6;
};

struct RunConfig {
    AbsorberParams absorber;
    DerivativeMode derivative_mode = DerivativeMode::exact;

    std::optional<double> g = 0.05;  // set: equal teeth from the coupling
    CombConfig comb;                 // used when g is unset
    double tooth_duration = 1.0e-9;  // tau0, only with g

    KernelModel kernel = kernel_forms::LorentzianCrossover{{6.0, 0.01, 0.020, 8.0}};
    std::string kernel_table;  // path, for the tabulated model

    GridRange temperature_mk{10.0, 50.0, 60};
    GridRange delay_tau0{1.0e-2, 1.0e2, 120};
    GridRange frequency_cycles{1.0e-4, 1.0e2, 120};
    std::vector<double> cut_temperatures_mk{15.0, 30.0, 45.0};

    Regime regime = Regime::weak;
    double probe_gamma = 0.0;

    OracleConfig oracle;
    double tolerance_sigma = 3.0;
    double analytic_perturbation_sigma = 0.0;  // negative control

    ReconstructOptions reconstruct;
    Fig3Options fig3;

    double tau0_seconds = 1.0e-6;
    std::string output_dir = "comb-sense-out";

    // Comb configuration at the given delay.
    CombConfig comb_at(double delta) const;
    std::vector<double> temperatures_kelvin() const;
    std::vector<double> delays() const;
    std::vector<double> omegas() const;  // rad/tau0
};

// Throws ParseError (with a 1-based line when known) on malformed JSON,
// unknown keys or out-of-range values.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::string& path);

// Effective configuration with every default filled in.
nlohmann::ordered_json to_json(const RunConfig& cfg);

// FNV-1a 64-bit hash of the canonical effective configuration.
std::string config_hash(const RunConfig& cfg);

} // namespace combsense::cli
