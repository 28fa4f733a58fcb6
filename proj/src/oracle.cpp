#include "combsense/oracle.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "combsense/errors.hpp"
#include "combsense/oracle_detail.hpp"
#include "combsense/parallel.hpp"

namespace combsense {

using parallel::Execution;

void OracleConfig::validate() const
{
    if (n_samples < 1000) {
        throw DomainError("oracle needs at least 1000 samples");
    }
    if (!(regime_guard > 0.0)) {
        throw DomainError("regime guard must be positive");
    }
}

std::uint64_t mix64(std::uint64_t x) noexcept
{
    // splitmix64 finalizer
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(mix64(mix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL)))
{
}

double CounterRng::uniform(std::uint64_t counter) const noexcept
{
    const std::uint64_t z = mix64(mix64(counter ^ key_) + key_);
    return (static_cast<double>(z >> 11) + 0.5) * 0x1.0p-53;
}

std::pair<double, double> CounterRng::normal_pair(std::uint64_t index) const noexcept
{
    const double u1 = uniform(2 * index);
    const double u2 = uniform(2 * index + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
}

CounterRng CounterRng::split(std::uint64_t stream) const noexcept
{
    return CounterRng(key_, stream + 1);
}

FluctuationPair sample_correlated(double sigma, double rho, const CounterRng& rng,
                                  std::uint64_t index)
{
    if (!(std::abs(rho) <= 1.0)) {
        throw DomainError("correlation coefficient magnitude exceeds 1");
    }
    const auto [z1, z2] = rng.normal_pair(index);
    return {sigma * z1, sigma * (rho * z1 + std::sqrt(1.0 - rho * rho) * z2)};
}

FluctuationPair sample_pair(const KernelModel& kernel, double temperature, double variance,
                            double delta, const CounterRng& rng, std::uint64_t index)
{
    if (!(variance >= 0.0)) {
        throw DomainError("variance must be non-negative");
    }
    const double rho = normalized_kernel(kernel, delta, temperature);
    return sample_correlated(std::sqrt(variance), rho, rng, index);
}

namespace detail {

void fill_phases(std::vector<double>& out, double sigma, double rho, double w1, double w2,
                 const CounterRng& rng)
{
    const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto p = sample_correlated(sigma, rho, rng, static_cast<std::uint64_t>(i));
        out[static_cast<std::size_t>(i)] = w1 * p.first + w2 * p.second;
    }
}

void fill_products(std::vector<double>& out, double sigma, double rho, const CounterRng& rng)
{
    const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto p = sample_correlated(sigma, rho, rng, static_cast<std::uint64_t>(i));
        out[static_cast<std::size_t>(i)] = p.first * p.second;
    }
}

void apply_cosine(std::vector<double>& values, double frequency, Execution exec)
{
    const auto n = static_cast<std::ptrdiff_t>(values.size());
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        auto& v = values[static_cast<std::size_t>(i)];
        v = std::cos(frequency * v);
    }
}

OracleEstimate estimate_mean(std::span<const double> values, Execution exec)
{
    const auto n = values.size();
    const double mean = parallel::deterministic_sum(values, exec) / static_cast<double>(n);
    std::vector<double> sq(n);
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const double d = values[static_cast<std::size_t>(i)] - mean;
        sq[static_cast<std::size_t>(i)] = d * d;
    }
    const double var = parallel::deterministic_sum(sq, exec) / static_cast<double>(n - 1);
    // Delete-one jackknife of a sample mean reduces to s / sqrt(N).
    return {mean, std::sqrt(var / static_cast<double>(n)), n};
}

OracleEstimate estimate_variance(std::span<const double> values, Execution exec)
{
    const auto n = values.size();
    const double nd = static_cast<double>(n);
    const double mean = parallel::deterministic_sum(values, exec) / nd;
    std::vector<double> sq(n);
    const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const double d = values[static_cast<std::size_t>(i)] - mean;
        sq[static_cast<std::size_t>(i)] = d * d;
    }
    const double ss = parallel::deterministic_sum(sq, exec);
    const double s2 = ss / (nd - 1.0);

    // Delete-one variances are affine in d_i^2:
    //   s2_(i) = [ss - N/(N-1) d_i^2] / (N-2)
    // so the jackknife variance is a scaled spread of the d_i^2.
    const double mean_sq = ss / nd;
    std::vector<double> spread(n);
#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
        const double e = sq[static_cast<std::size_t>(i)] - mean_sq;
        spread[static_cast<std::size_t>(i)] = e * e;
    }
    const double scale = nd / ((nd - 1.0) * (nd - 2.0));
    const double jack_var = (nd - 1.0) / nd * scale * scale * parallel::deterministic_sum(spread, exec);
    return {s2, std::sqrt(jack_var), n};
}

PhaseSetup phase_setup(const CombConfig& cfg, const KernelModel& kernel, double temperature,
                       const AbsorberParams& absorber, const OracleConfig& oracle)
{
    cfg.validate();
    oracle.validate();
    const auto th = thermal_state(absorber, temperature);
    PhaseSetup s;
    s.sigma = std::sqrt(th.variance);
    s.rho = normalized_kernel(kernel, cfg.delta, temperature);
    s.w1 = cfg.lambda * cfg.tau1;
    s.w2 = cfg.lambda * cfg.tau2;
    s.analytic_sigma_sq = phase_variance_two(cfg, th.variance, th.variance * s.rho);
    s.rng = CounterRng(oracle.seed);
    return s;
}

void check_guard(const CombConfig& cfg, const PhaseSetup& s, const OracleConfig& oracle)
{
    const double exponent = dephasing_exponent(s.analytic_sigma_sq, cfg.alpha_sq, Regime::weak);
    if (exponent > oracle.regime_guard) {
        throw OutOfRegimeError("two-tooth dephasing exponent " + std::to_string(exponent) +
                               " exceeds the weak-dephasing guard " +
                               std::to_string(oracle.regime_guard));
    }
}

} // namespace detail

OracleEstimate mc_phase_variance(const CombConfig& cfg, const KernelModel& kernel,
                                 double temperature, const AbsorberParams& absorber,
                                 const OracleConfig& oracle)
{
    const auto s = detail::phase_setup(cfg, kernel, temperature, absorber, oracle);
    std::vector<double> phases(oracle.n_samples);
    detail::fill_phases(phases, s.sigma, s.rho, s.w1, s.w2, s.rng);
    return detail::estimate_variance(phases, Execution::parallel);
}

OracleEstimate mc_coherence_two(const CombConfig& cfg, const KernelModel& kernel,
                                double temperature, const AbsorberParams& absorber,
                                const OracleConfig& oracle)
{
    const auto s = detail::phase_setup(cfg, kernel, temperature, absorber, oracle);
    detail::check_guard(cfg, s, oracle);
    std::vector<double> values(oracle.n_samples);
    detail::fill_phases(values, s.sigma, s.rho, s.w1, s.w2, s.rng);
    detail::apply_cosine(values, std::sqrt(2.0 * cfg.alpha_sq), Execution::parallel);
    return detail::estimate_mean(values, Execution::parallel);
}

OracleEstimate mc_cross_covariance(const KernelModel& kernel, double temperature,
                                   double variance, double delta, const OracleConfig& oracle)
{
    oracle.validate();
    if (!(variance >= 0.0)) {
        throw DomainError("variance must be non-negative");
    }
    const double rho = normalized_kernel(kernel, delta, temperature);
    std::vector<double> products(oracle.n_samples);
    detail::fill_products(products, std::sqrt(variance), rho, CounterRng(oracle.seed));
    return detail::estimate_mean(products, Execution::parallel);
}

std::vector<ValidationPoint> default_validation_matrix()
{
    using namespace kernel_forms;
    const CorrelationTimeModel crossover{6.0, 0.01, 0.020, 8.0};
    auto cfg = [](double lambda, double tau1, double tau2, double delta) {
        return CombConfig{lambda, tau1, tau2, 1.0, delta};
    };
    const double mk = 1.0e-3;
    return {
        {"lor-fixed-1", cfg(0.02, 3.0, 3.0, 10.0), LorentzianFixed{10.0}, 30 * mk},
        {"lor-fixed-2", cfg(0.03, 2.0, 4.0, 6.0), LorentzianFixed{10.0}, 20 * mk},
        {"lor-fixed-3", cfg(0.05, 1.0, 1.0, 2.0), LorentzianFixed{3.0}, 40 * mk},
        {"lor-fixed-4", cfg(0.01, 5.0, 5.0, 50.0), LorentzianFixed{10.0}, 50 * mk},
        {"lor-crossover-1", cfg(0.2, 0.5, 0.5, 1.0), LorentzianCrossover{crossover}, 15 * mk},
        {"lor-crossover-2", cfg(0.2, 0.5, 0.5, 5.0), LorentzianCrossover{crossover}, 20 * mk},
        {"lor-crossover-3", cfg(0.3, 0.05, 0.05, 0.1), LorentzianCrossover{crossover}, 30 * mk},
        {"white-1", cfg(0.02, 3.0, 3.0, 0.0), GaussianWhite{1.0e-3}, 25 * mk},
        {"white-2", cfg(0.03, 1.0, 1.0, 2.0), GaussianWhite{2.0}, 30 * mk},
        {"white-3", cfg(0.03, 1.0, 1.0, 3.0), GaussianWhite{2.0}, 35 * mk},
        {"white-4", cfg(0.02, 2.0, 2.0, 4.0), GaussianWhite{5.0}, 40 * mk},
        {"white-5", cfg(0.02, 3.0, 3.0, 10.0), GaussianWhite{1.0e-3}, 45 * mk},
        {"white-6", cfg(0.1, 0.25, 0.25, 0.5), GaussianWhite{1.0}, 20 * mk},
        {"white-7", cfg(0.015, 2.0, 4.0, 6.0), GaussianWhite{3.0}, 35 * mk},
        {"one-over-f-1", cfg(0.02, 3.0, 3.0, 6.0), OneOverF{0.1, 0.6}, 30 * mk},
        {"one-over-f-2", cfg(0.1, 0.5, 0.5, 1.0), OneOverF{0.1, 0.6}, 20 * mk},
        {"one-over-f-3", cfg(0.02, 3.0, 3.0, 100.0), OneOverF{0.1, 0.6}, 40 * mk},
        {"one-over-f-4", cfg(0.02, 3.0, 3.0, 0.0), OneOverF{0.1, 0.6}, 15 * mk},
        {"one-over-f-5", cfg(0.03, 2.0, 2.0, 10.0), OneOverF{1.0, 0.3}, 25 * mk},
        {"one-over-f-6", cfg(0.05, 1.0, 1.5, 2.5), OneOverF{0.5, 0.8}, 50 * mk},
    };
}

std::vector<OracleComparison> run_validation(const std::vector<ValidationPoint>& points,
                                             const AbsorberParams& absorber,
                                             const OracleConfig& oracle, double tolerance_sigma,
                                             double analytic_shift_sigma)
{
    std::vector<OracleComparison> out;
    std::uint64_t stream = 0;
    for (const auto& pt : points) {
        const auto th = thermal_state(absorber, pt.temperature);
        const double k = th.variance * normalized_kernel(pt.kernel, pt.cfg.delta, pt.temperature);

        auto compare = [&](const std::string& quantity, double analytic, auto&& estimator) {
            OracleComparison c;
            c.label = pt.label;
            c.quantity = quantity;
            c.kernel = std::string(kernel_name(pt.kernel));
            c.temperature = pt.temperature;
            c.delta = pt.cfg.delta;
            OracleConfig local = oracle;
            local.seed = mix64(oracle.seed ^ mix64(++stream));
            c.seed = local.seed;
            try {
                c.estimate = estimator(local);
            } catch (const OutOfRegimeError& e) {
                c.skipped = true;
                c.reason = e.what();
                out.push_back(c);
                return;
            }
            c.analytic = analytic + analytic_shift_sigma * c.estimate.std_error;
            const double diff = c.estimate.mean - c.analytic;
            if (c.estimate.std_error > 0.0) {
                c.z_score = diff / c.estimate.std_error;
                c.passed = std::abs(c.z_score) <= tolerance_sigma;
            } else {
                c.z_score = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
                c.passed = diff == 0.0;
            }
            out.push_back(c);
        };

        compare("phase_variance", phase_variance_two(pt.cfg, th.variance, k),
                [&](const OracleConfig& o) {
                    return mc_phase_variance(pt.cfg, pt.kernel, pt.temperature, absorber, o);
                });
        compare("coherence_two",
                coherence_two(pt.cfg, pt.temperature, absorber, pt.kernel, Regime::weak),
                [&](const OracleConfig& o) {
                    return mc_coherence_two(pt.cfg, pt.kernel, pt.temperature, absorber, o);
                });
    }
    return out;
}

} // namespace combsense
