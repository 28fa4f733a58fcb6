#pragma once

// Building blocks shared by the OpenMP oracle and its serial reference.

#include <span>
#include <vector>

#include "combsense/oracle.hpp"
#include "combsense/parallel.hpp"

namespace combsense::detail {

struct PhaseSetup {
    double sigma = 0.0;
    double rho = 0.0;
    double w1 = 0.0;  // lambda tau1
    double w2 = 0.0;  // lambda tau2
    double analytic_sigma_sq = 0.0;
    CounterRng rng{0};
};

PhaseSetup phase_setup(const CombConfig& cfg, const KernelModel& kernel, double temperature,
                       const AbsorberParams& absorber, const OracleConfig& oracle);
void check_guard(const CombConfig& cfg, const PhaseSetup& setup, const OracleConfig& oracle);

void fill_phases(std::vector<double>& out, double sigma, double rho, double w1, double w2,
                 const CounterRng& rng);
void fill_products(std::vector<double>& out, double sigma, double rho, const CounterRng& rng);
void apply_cosine(std::vector<double>& values, double frequency, parallel::Execution exec);

OracleEstimate estimate_mean(std::span<const double> values, parallel::Execution exec);
OracleEstimate estimate_variance(std::span<const double> values, parallel::Execution exec);

} // namespace combsense::detail
