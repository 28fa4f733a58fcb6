#pragma once

// Straightforward serial implementations of the OpenMP kernels. They share the
// per-element routines with the parallel paths and are kept to check that the
// parallel results are bit-identical.

#include <span>
#include <vector>

#include "combsense/grids.hpp"
#include "combsense/oracle.hpp"
#include "combsense/spectroscopy.hpp"

namespace combsense::reference {

EfficiencyMap efficiency_map(const MapSpec& spec, const std::vector<double>& temperatures,
                             const std::vector<double>& delays);

SpectrumEstimate cosine_transform(const KernelEstimate& estimate, std::span<const double> omegas,
                                  Quadrature rule = Quadrature::linear_exact_cosine);

OracleEstimate mc_phase_variance(const CombConfig& cfg, const KernelModel& kernel,
                                 double temperature, const AbsorberParams& absorber,
                                 const OracleConfig& oracle);

OracleEstimate mc_coherence_two(const CombConfig& cfg, const KernelModel& kernel,
                                double temperature, const AbsorberParams& absorber,
                                const OracleConfig& oracle);

} // namespace combsense::reference
