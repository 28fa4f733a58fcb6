#include <doctest.h>

#include <cmath>
#include <random>

#include "combsense/errors.hpp"
#include "combsense/grids.hpp"
#include "combsense/metrology.hpp"
#include "support/finite_difference.hpp"

using namespace combsense;
using namespace combsense::kernel_forms;

namespace {

const AbsorberParams ghz;
const CorrelationTimeModel fig2{6.0, 0.01, 0.020, 8.0};
const LorentzianCrossover cross{fig2};

// Radial QFI evaluated the textbook way, straight from C and a finite
// difference of C. Independent of the exponent bookkeeping in the library.
template <class F>
double radial_qfi_fd(F&& coherence, double t)
{
    const double c = coherence(t);
    const double dc = testsupport::richardson_derivative(coherence, t);
    return dc * dc / (1.0 - c * c);
}

} // namespace

TEST_CASE("radial QFI from coherence")
{
    CHECK(qfi_from_coherence(0.5, 0.0) == 0.0);
    CHECK(qfi_from_coherence(0.5, 0.01) == doctest::Approx(1e-4 / 0.75));
    CHECK(qfi_from_coherence(0.5, 0.01) == doctest::Approx(1.333e-4).epsilon(1e-3));
    CHECK_THROWS_AS(qfi_from_coherence(1.0, 0.1), SingularVisibilityError);
    CHECK_THROWS_AS(qfi_from_coherence(0.0, 0.1), DomainError);
    CHECK_THROWS_AS(qfi_from_coherence(-0.2, 0.1), DomainError);
}

TEST_CASE("exponent form equals the coherence form")
{
    for (double e : {1e-6, 1e-3, 0.05, 0.7, 3.0}) {
        const double de = 12.5;
        const double c = std::exp(-e);
        const double dc = -c * de;
        CHECK(qfi_from_exponent(e, de) == doctest::Approx(qfi_from_coherence(c, dc)).epsilon(1e-9));
        CHECK(qfi_from_exponent(e, de) == doctest::Approx(de * de / (std::exp(2 * e) - 1)).epsilon(1e-9));
    }
    CHECK(qfi_from_exponent(0.0, 0.0) == 0.0);
    CHECK_THROWS_AS(qfi_from_exponent(0.0, 1.0), SingularVisibilityError);
    CHECK(qfi_weak_limit(0.01, 2.0) == doctest::Approx(200.0));
    CHECK(qfi_from_exponent(1e-8, 2.0) == doctest::Approx(qfi_weak_limit(1e-8, 2.0)).epsilon(1e-7));
}

TEST_CASE("one-tooth QFI")
{
    const CombConfig off{0.0, 1.0, 1.0, 1.0, 0.0};
    CHECK(qfi_one(off, Tooth::first, 0.03, ghz, Regime::weak) == 0.0);

    const auto cfg = CombConfig::from_coupling(0.05, 0.0);
    const double f1 = qfi_one(cfg, Tooth::first, 0.030, ghz, Regime::weak);
    CHECK(f1 > 0.0);
    CHECK(std::isfinite(f1));
    // Weak-regime closed form [(lambda tau)^2 dn C1]^2 / (1 - C1^2).
    const double n = thermal_occupation(ghz, 0.030);
    const double dn = occupation_derivative(ghz, 0.030);
    const double c1 = std::exp(-0.05 * n);
    CHECK(f1 == doctest::Approx(std::pow(0.05 * dn * c1, 2) / (1 - c1 * c1)).epsilon(1e-10));
    // Regression fixture.
    CHECK(f1 == doctest::Approx(27.8893208287).epsilon(1e-10));

    for (auto regime : {Regime::weak, Regime::exact}) {
        const auto c = [&](double x) { return coherence_one(cfg, Tooth::first, x, ghz, regime); };
        CHECK(testsupport::relative_error(qfi_one(cfg, Tooth::first, 0.03, ghz, regime),
                                          radial_qfi_fd(c, 0.03)) < 1e-6);
    }
}

TEST_CASE("two-tooth QFI against finite differences")
{
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> temp(0.010, 0.050);
    std::uniform_real_distribution<double> logd(std::log(1e-2), std::log(1e2));
    for (int i = 0; i < 40; ++i) {
        const double t = temp(gen);
        const auto cfg = CombConfig::from_coupling(0.05, std::exp(logd(gen)));
        for (auto regime : {Regime::weak, Regime::exact}) {
            const auto c = [&](double x) { return coherence_two(cfg, x, ghz, cross, regime); };
            CHECK(testsupport::relative_error(qfi_two(cfg, t, ghz, cross, regime), radial_qfi_fd(c, t)) < 1e-6);
        }
    }
}

TEST_CASE("two-tooth QFI in the uncorrelated limit")
{
    const LorentzianFixed lor{0.01};
    const CombConfig cfg{0.2, 1.0, 1.0, 1.0, 50.0};
    const auto one = coherence_one_point(cfg, Tooth::first, 0.03, ghz, Regime::weak);
    const double expected = qfi_from_exponent(2 * one.exponent, 2 * one.dexponent_dT);
    CHECK(qfi_two(cfg, 0.03, ghz, lor, Regime::weak) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("two-tooth QFI is non-monotone in delay at 45 mK")
{
    const auto delays = log_grid(1e-2, 1e2, 120);
    int sign_changes = 0;
    double prev_diff = 0.0;
    double prev = qfi_two(CombConfig::from_coupling(0.05, delays[0]), 0.045, ghz, cross, Regime::weak);
    for (std::size_t i = 1; i < delays.size(); ++i) {
        const double f = qfi_two(CombConfig::from_coupling(0.05, delays[i]), 0.045, ghz, cross, Regime::weak);
        const double diff = f - prev;
        if (prev_diff != 0.0 && diff != 0.0 && (diff > 0) != (prev_diff > 0)) {
            ++sign_changes;
        }
        if (diff != 0.0) {
            prev_diff = diff;
        }
        prev = f;
    }
    CHECK(sign_changes >= 1);
}

TEST_CASE("full two-tooth QFI with probe dephasing")
{
    const auto cfg = CombConfig::from_coupling(0.05, 0.5);
    const double t = 0.03;
    for (auto regime : {Regime::weak, Regime::exact}) {
        const double f2 = qfi_two(cfg, t, ghz, cross, regime);
        CHECK(qfi_two_full(cfg, t, ghz, cross, ProbeDephasing{0.0}, regime) == f2);
        CHECK(qfi_two_full(cfg, t, ghz, cross, ProbeDephasing{1.0}, regime) < f2);  // gamma delta = 0.5

        // Radial form on Cp^2 C2 with the probe factor held fixed in T.
        const double cp2 = std::exp(-2.0 * 1.0 * cfg.delta);
        const auto full = [&](double x) { return cp2 * coherence_two(cfg, x, ghz, cross, regime); };
        CHECK(testsupport::relative_error(qfi_two_full(cfg, t, ghz, cross, ProbeDephasing{1.0}, regime),
                                          radial_qfi_fd(full, t)) < 1e-6);

        // Small gamma delta: relative change is first order.
        const double small = qfi_two_full(cfg, t, ghz, cross, ProbeDephasing{1e-4}, regime);
        // Shift of the exponent by 2 gamma delta changes F by about 4 gamma delta / (2E).
        const double e = coherence_two_point(cfg, t, ghz, cross, regime).exponent;
        const double rel = 1.0 - small / f2;
        CHECK(rel > 0.0);
        CHECK(rel == doctest::Approx(4e-4 * cfg.delta / (2.0 * e)).epsilon(0.05));

        double prev = f2;
        for (double g = 0.01; g < 3.0; g *= 1.5) {
            const double f = qfi_two_full(cfg, t, ghz, cross, ProbeDephasing{g}, regime);
            CHECK(f <= prev);
            prev = f;
        }
    }
}

TEST_CASE("memory efficiency limits")
{
    const double t = 0.03;
    const auto markov = memory_efficiency(CombConfig::from_coupling(0.05, 1e2), t, ghz,
                                          LorentzianFixed{1.0}, Regime::weak);
    CHECK(markov.k_tilde < 1e-12);
    CHECK(markov.advantage_weak_limit == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(markov.advantage_approx == doctest::Approx(1.0).epsilon(1e-6));
    // Full-QFI ratio in the same limit: 2 / (1 + exp(2 Gamma1)).
    const double g1 = 0.05 * thermal_occupation(ghz, t);
    CHECK(markov.advantage == doctest::Approx(2.0 / (1.0 + std::exp(2.0 * g1))).epsilon(1e-10));

    const auto shortd = memory_efficiency(CombConfig::from_coupling(0.05, 1e-6), t, ghz, cross, Regime::weak);
    CHECK(shortd.advantage_weak_limit == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(shortd.advantage_approx == doctest::Approx(2.0).epsilon(1e-4));
    CHECK(shortd.variance_gain == doctest::Approx(2.0).epsilon(1e-5));

    const CombConfig off{0.0, 1.0, 1.0, 1.0, 5.0};
    CHECK_THROWS_AS(memory_efficiency(off, t, ghz, cross, Regime::weak), DegenerateProtocolError);
}

TEST_CASE("memory efficiency field invariants on the map grid")
{
    const auto temps = linear_grid(0.010, 0.050, 12);
    const auto delays = log_grid(1e-2, 1e2, 30);
    for (double t : temps) {
        for (double d : delays) {
            const auto b = memory_efficiency(CombConfig::from_coupling(0.05, d), t, ghz, cross, Regime::weak);
            CHECK(b.f1_tooth1 >= 0.0);
            CHECK(b.f2 >= 0.0);
            CHECK(b.variance_gain >= 1.0);
            CHECK(b.variance_gain <= 2.0);
            CHECK(b.advantage == doctest::Approx(b.f2 / (b.f1_tooth1 + b.f1_tooth2)));
            // Equal teeth, approximate variance: leading-order ratio equals the factorized form exactly.
            CHECK(b.advantage_weak_limit == doctest::Approx(b.advantage_approx).epsilon(1e-9));
        }
    }
}

TEST_CASE("decomposed efficiency")
{
    const auto none = decomposed_efficiency(0.1, 5.0, 0.0, 0.0);
    CHECK(none.advantage_approx == 1.0);
    CHECK(none.variance_gain == 1.0);
    CHECK(none.responsivity_factor == 1.0);
    CHECK(none.s_kernel == 0.0);
    CHECK(none.s_nbar == doctest::Approx(50.0));

    // S_K = -S_n cancels the bracket: dk / (1 + k) = -dn / n.
    const double n = 0.1, dn = 5.0, k = 0.5;
    const auto cancel = decomposed_efficiency(n, dn, k, -(1 + k) * dn / n);
    CHECK(cancel.advantage_approx == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_THROWS_AS(decomposed_efficiency(0.0, 1.0, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(decomposed_efficiency(0.1, 0.0, 0.0, 0.0), DomainError);
}

TEST_CASE("decomposition tracks the full ratio in weak dephasing")
{
    const auto temps = linear_grid(0.010, 0.050, 60);
    const auto delays = log_grid(1e-2, 1e2, 120);
    int checked = 0;
    for (double t : temps) {
        for (double d : delays) {
            const auto b = memory_efficiency(CombConfig::from_coupling(0.05, d), t, ghz, cross, Regime::weak);
            if (b.gamma_phi2 < 0.02 && b.advantage > 1e-6) {
                CHECK(std::abs(b.advantage_approx - b.advantage) / b.advantage < 0.02);
                ++checked;
            }
        }
    }
    CHECK(checked > 1000);
}

TEST_CASE("Fig. 2 structure of the minimum over delay")
{
    MapSpec spec{CombConfig::from_coupling(0.05, 0.0), ghz, cross, Regime::weak};
    const auto map = efficiency_map(spec, {0.015, 0.045}, log_grid(1e-2, 1e2, 120));
    const auto minima = advantage_minima(map);
    const double tc15 = correlation_time(fig2, 0.015);
    const double tc45 = correlation_time(fig2, 0.045);
    CHECK(std::abs(minima[0].delta - tc15) / tc15 > 0.2);
    CHECK(minima[1].advantage < 1.0);
    CHECK(minima[1].delta / tc45 < 3.0);
    CHECK(tc45 / minima[1].delta < 3.0);
}
