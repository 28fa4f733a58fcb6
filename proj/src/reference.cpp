#include "combsense/reference.hpp"

#include <algorithm>
#include <cmath>

#include "combsense/errors.hpp"
#include "combsense/oracle_detail.hpp"

namespace combsense::reference {

using parallel::Execution;

EfficiencyMap efficiency_map(const MapSpec& spec, const std::vector<double>& temperatures,
                             const std::vector<double>& delays)
{
    EfficiencyMap map{temperatures, delays, {}};
    map.cells.reserve(temperatures.size() * delays.size());
    for (double t : temperatures) {
        for (double d : delays) {
            map.cells.push_back(efficiency_cell(spec, t, d));
        }
    }
    return map;
}

SpectrumEstimate cosine_transform(const KernelEstimate& estimate, std::span<const double> omegas,
                                  Quadrature rule)
{
    std::vector<double> delays;
    std::vector<double> values;
    for (std::size_t i = 0; i < estimate.delays.size(); ++i) {
        const bool ok = estimate.status.empty() || estimate.status[i] == PointStatus::ok;
        if (ok && std::isfinite(estimate.k_hat[i])) {
            delays.push_back(estimate.delays[i]);
            values.push_back(estimate.k_hat[i]);
        }
    }
    if (delays.size() < 4) {
        throw InsufficientDataError("cosine transform needs at least 4 usable delay points");
    }
    SpectrumEstimate spec;
    spec.omegas.assign(omegas.begin(), omegas.end());
    spec.points_used = delays.size();
    spec.ir_cutoff = 1.0 / delays.back();
    spec.uv_cutoff = delays.front() > 0.0 ? 1.0 / delays.front() : 1.0 / delays[1];
    for (double w : omegas) {
        spec.s_nn.push_back(detail::cosine_integral(delays, values, w, rule));
    }
    spec.negative_count = static_cast<std::size_t>(
        std::count_if(spec.s_nn.begin(), spec.s_nn.end(), [](double v) { return v < 0.0; }));
    return spec;
}

namespace {

std::vector<double> serial_phases(const detail::PhaseSetup& s, std::uint64_t n)
{
    std::vector<double> phases;
    phases.reserve(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        const auto p = sample_correlated(s.sigma, s.rho, s.rng, i);
        phases.push_back(s.w1 * p.first + s.w2 * p.second);
    }
    return phases;
}

} // namespace

OracleEstimate mc_phase_variance(const CombConfig& cfg, const KernelModel& kernel,
                                 double temperature, const AbsorberParams& absorber,
                                 const OracleConfig& oracle)
{
    const auto s = detail::phase_setup(cfg, kernel, temperature, absorber, oracle);
    const auto phases = serial_phases(s, oracle.n_samples);
    return detail::estimate_variance(phases, Execution::serial);
}

OracleEstimate mc_coherence_two(const CombConfig& cfg, const KernelModel& kernel,
                                double temperature, const AbsorberParams& absorber,
                                const OracleConfig& oracle)
{
    const auto s = detail::phase_setup(cfg, kernel, temperature, absorber, oracle);
    detail::check_guard(cfg, s, oracle);
    auto values = serial_phases(s, oracle.n_samples);
    detail::apply_cosine(values, std::sqrt(2.0 * cfg.alpha_sq), Execution::serial);
    return detail::estimate_mean(values, Execution::serial);
}

} // namespace combsense::reference
