#include <doctest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "combsense/errors.hpp"
#include "combsense/oracle.hpp"
#include "combsense/parallel.hpp"
#include "combsense/reference.hpp"

using namespace combsense;
using namespace combsense::kernel_forms;

namespace {

const AbsorberParams ghz;
const CorrelationTimeModel fig2{6.0, 0.01, 0.020, 8.0};

bool same_estimate(const OracleEstimate& a, const OracleEstimate& b)
{
    return std::memcmp(&a.mean, &b.mean, sizeof(double)) == 0 &&
           std::memcmp(&a.std_error, &b.std_error, sizeof(double)) == 0 && a.n_samples == b.n_samples;
}

OracleConfig samples(std::uint64_t n, std::uint64_t seed = 42)
{
    OracleConfig o;
    o.n_samples = n;
    o.seed = seed;
    return o;
}

// Sample correlation of draws from sample_pair.
double sample_correlation(const KernelModel& m, double t, double delta, std::uint64_t n, std::uint64_t seed)
{
    const CounterRng rng(seed);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        const auto p = sample_pair(m, t, 0.2, delta, rng, i);
        sxy += p.first * p.second;
        sxx += p.first * p.first;
        syy += p.second * p.second;
    }
    return sxy / std::sqrt(sxx * syy);
}

} // namespace

TEST_CASE("counter-based generator")
{
    const CounterRng a(42);
    const CounterRng b(42);
    const CounterRng c(43);
    CHECK(a.uniform(7) == b.uniform(7));
    CHECK(a.uniform(7) != c.uniform(7));
    CHECK(a.split(1).key() != a.split(2).key());
    double mean = 0.0, sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = a.uniform(static_cast<std::uint64_t>(i));
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        const auto z = a.normal_pair(static_cast<std::uint64_t>(i));
        mean += z.first;
        sq += z.first * z.first;
    }
    mean /= n;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(n));
    CHECK(std::abs(sq / n - 1.0) < 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("pair sampling")
{
    const CounterRng rng(1);
    const auto same = sample_pair(LorentzianFixed{10.0}, 0.02, 0.2, 0.0, rng, 5);
    CHECK(same.first == doctest::Approx(same.second).epsilon(1e-15));

    const std::uint64_t n = 100000;
    const double se = 1.0 / std::sqrt(static_cast<double>(n));
    CHECK(std::abs(sample_correlation(LorentzianFixed{0.01}, 0.02, 50.0, n, 9)) < 3.0 * se);
    const double rho = sample_correlation(LorentzianFixed{10.0}, 0.02, 10.0, n, 10);
    // Standard error of a correlation estimate is (1 - rho^2)/sqrt(N).
    const double e1 = std::exp(-1.0);
    CHECK(std::abs(rho - e1) < 3.0 * (1.0 - e1 * e1) * se);

    CHECK_THROWS_AS(sample_correlated(1.0, 1.5, rng, 0), DomainError);
    CHECK_THROWS_AS(sample_pair(LorentzianFixed{10.0}, 0.02, -1.0, 1.0, rng, 0), DomainError);
}

TEST_CASE("oracle configuration")
{
    CHECK_THROWS_AS(samples(999).validate(), DomainError);
    CHECK_NOTHROW(samples(1000).validate());
    OracleConfig bad = samples(5000);
    bad.regime_guard = 0.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
}

TEST_CASE("phase variance estimates")
{
    const CombConfig off{0.0, 3.0, 3.0, 1.0, 10.0};
    const auto zero = mc_phase_variance(off, LorentzianFixed{10.0}, 0.03, ghz, samples(10000));
    CHECK(zero.mean == 0.0);
    CHECK(zero.std_error == 0.0);

    const CombConfig cfg{0.5, 3.0, 3.0, 1.0, 10.0};
    const LorentzianFixed lor{10.0};
    const double var = thermal_occupation(ghz, 0.03);
    const auto est = mc_phase_variance(cfg, lor, 0.03, ghz, samples(100000));
    const double analytic = phase_variance_two(cfg, var, kernel(lor, 10.0, 0.03, var));
    CHECK(std::abs(est.mean - analytic) < 3.0 * est.std_error);
    // Gaussian sample variance: SE ~ sigma^2 sqrt(2/N).
    CHECK(est.std_error == doctest::Approx(analytic * std::sqrt(2.0 / 1e5)).epsilon(0.05));

    const CombConfig same{0.2, 1.0, 1.0, 1.0, 0.0};
    const auto full = mc_phase_variance(same, lor, 0.03, ghz, samples(100000, 3));
    CHECK(std::abs(full.mean - 4.0 * 0.04 * var) < 3.0 * full.std_error);
}

TEST_CASE("phase variance over random parameter draws")
{
    CounterRng draw(2024);
    int index = 0;
    for (int i = 0; i < 20; ++i) {
        const double lambda = 0.05 + 0.5 * draw.uniform(index++);
        const double tau1 = 0.5 + 3.0 * draw.uniform(index++);
        const double tau2 = 0.5 + 3.0 * draw.uniform(index++);
        const double delta = (tau1 + tau2) * (1.0 + 10.0 * draw.uniform(index++));
        const double t = 0.01 + 0.04 * draw.uniform(index++);
        const CombConfig cfg{lambda, tau1, tau2, 1.0, delta};
        const LorentzianCrossover cross{fig2};
        const double var = thermal_occupation(ghz, t);
        const double analytic = phase_variance_two(cfg, var, kernel(cross, delta, t, var));
        const auto est = mc_phase_variance(cfg, cross, t, ghz, samples(100000, 100 + i));
        CHECK(std::abs(est.mean - analytic) < 3.0 * est.std_error);
    }
}

TEST_CASE("coherence estimates")
{
    // Independent teeth: C1(1) C1(2).
    const CombConfig indep{0.05, 1.0, 2.0, 1.0, 1e3};
    const LorentzianFixed lor{1.0};
    const auto est = mc_coherence_two(indep, lor, 0.03, ghz, samples(100000, 5));
    const double product = coherence_one(indep, Tooth::first, 0.03, ghz, Regime::weak) *
                           coherence_one(indep, Tooth::second, 0.03, ghz, Regime::weak);
    CHECK(std::abs(est.mean - product) < 3.0 * est.std_error);
    CHECK(est.mean > 0.0);
    CHECK(est.mean <= 1.0);

    // Fig. 2 parameters at 30 mK and delta = tau_c. The two-tooth exponent is
    // about 0.035 here, above the default guard, so the guard is raised.
    const double t = 0.030;
    const auto cfg = CombConfig::from_coupling(0.05, correlation_time(fig2, t));
    const LorentzianCrossover cross{fig2};
    OracleConfig o = samples(100000, 6);
    CHECK_THROWS_AS(mc_coherence_two(cfg, cross, t, ghz, o), OutOfRegimeError);
    o.regime_guard = 0.05;
    const auto fig = mc_coherence_two(cfg, cross, t, ghz, o);
    CHECK(std::abs(fig.mean - coherence_two(cfg, t, ghz, cross, Regime::weak)) < 3.0 * fig.std_error);
}

TEST_CASE("cross covariance matches the kernel")
{
    for (const KernelModel& m : {KernelModel{LorentzianCrossover{fig2}}, KernelModel{GaussianWhite{2.0}},
                                 KernelModel{OneOverF{0.1, 0.6}}}) {
        CounterRng draw(77);
        for (std::uint64_t i = 0; i < 20; ++i) {
            const double t = 0.01 + 0.04 * draw.uniform(2 * i);
            const double delta = std::exp(std::log(1e-2) + std::log(1e4) * draw.uniform(2 * i + 1));
            const double var = thermal_occupation(ghz, t);
            const auto est = mc_cross_covariance(m, t, var, delta, samples(100000, 1000 + i));
            CHECK(std::abs(est.mean - kernel(m, delta, t, var)) < 3.0 * est.std_error);
        }
    }
}

TEST_CASE("standard error falls as one over root N")
{
    const CombConfig cfg{0.5, 3.0, 3.0, 1.0, 10.0};
    const LorentzianFixed lor{10.0};
    const auto a = mc_phase_variance(cfg, lor, 0.03, ghz, samples(10000));
    const auto b = mc_phase_variance(cfg, lor, 0.03, ghz, samples(40000));
    const auto c = mc_phase_variance(cfg, lor, 0.03, ghz, samples(160000));
    CHECK(a.std_error / b.std_error == doctest::Approx(2.0).epsilon(0.2));
    CHECK(b.std_error / c.std_error == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("estimates are deterministic and match the serial reference")
{
    const CombConfig cfg{0.1, 1.0, 2.0, 1.0, 4.0};
    const OneOverF onef{0.1, 0.6};
    const auto o = samples(30001, 99);
    const auto ref_var = reference::mc_phase_variance(cfg, onef, 0.025, ghz, o);
    const auto ref_coh = reference::mc_coherence_two(cfg, onef, 0.025, ghz, o);
    for (int threads : {1, 2, 3, 8}) {
        parallel::set_thread_count(threads);
        CHECK(same_estimate(mc_phase_variance(cfg, onef, 0.025, ghz, o), ref_var));
        CHECK(same_estimate(mc_coherence_two(cfg, onef, 0.025, ghz, o), ref_coh));
    }
    parallel::set_thread_count(0);
    auto other = o;
    other.seed = 100;
    CHECK_FALSE(same_estimate(mc_phase_variance(cfg, onef, 0.025, ghz, other), ref_var));
}

TEST_CASE("default validation matrix passes and the negative control fails")
{
    const auto matrix = default_validation_matrix();
    CHECK(matrix.size() == 20);
    const auto results = run_validation(matrix, ghz, OracleConfig{});
    CHECK(results.size() == 40);
    for (const auto& r : results) {
        INFO(r.label, " ", r.quantity, " z=", r.z_score, " ", r.reason);
        CHECK_FALSE(r.skipped);
        CHECK(r.passed);
    }
    const auto shifted = run_validation(matrix, ghz, OracleConfig{}, 3.0, 5.0);
    std::size_t failed = 0;
    for (const auto& r : shifted) {
        failed += !r.passed;
    }
    CHECK(failed > 30);
}
