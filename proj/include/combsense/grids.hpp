#pragma once

// Parameter-grid evaluation of the memory efficiency over (T, delta).

#include <cstddef>
#include <vector>

#include "combsense/coherence.hpp"
#include "combsense/kernels.hpp"
#include "combsense/metrology.hpp"
#include "combsense/physics.hpp"

namespace combsense {

std::vector<double> linear_grid(double lo, double hi, std::size_t count);
std::vector<double> log_grid(double lo, double hi, std::size_t count);

struct MapSpec {
    CombConfig comb;  // delay overwritten per cell
    AbsorberParams absorber;
    KernelModel kernel;
    Regime regime = Regime::weak;
};

// Row-major over (temperature, delay). Cells where the QFI is singular or the
// protocol degenerate hold NaN in every field.
struct EfficiencyMap {
    std::vector<double> temperatures;  // kelvin
    std::vector<double> delays;        // tau0
    std::vector<QfiBreakdown> cells;

    const QfiBreakdown& at(std::size_t ti, std::size_t di) const
    {
        return cells[ti * delays.size() + di];
    }
};

QfiBreakdown missing_breakdown();

// Single cell with singular points mapped to missing values.
QfiBreakdown efficiency_cell(const MapSpec& spec, double temperature, double delta);

EfficiencyMap efficiency_map(const MapSpec& spec, const std::vector<double>& temperatures,
                             const std::vector<double>& delays);

struct DelayMinimum {
    double temperature;
    double delta;      // argmin over the delay axis
    double advantage;  // A at the minimum
};

// Minimum of the full-QFI advantage along each temperature row; NaN cells skipped.
std::vector<DelayMinimum> advantage_minima(const EfficiencyMap& map);

} // namespace combsense
