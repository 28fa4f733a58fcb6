#include <doctest.h>

#include <cmath>
#include <random>

#include "combsense/errors.hpp"
#include "combsense/physics.hpp"
#include "support/finite_difference.hpp"

using namespace combsense;

namespace {

// Bose-Einstein occupation written out directly from the constants, used as
// an independent check of the library's expm1 form.
double occupation_direct(double f_hz, double t)
{
    const double hbar = 1.054571817e-34;
    const double kb = 1.380649e-23;
    const double x = hbar * 2.0 * M_PI * f_hz / (kb * t);
    return 1.0 / (std::exp(x) - 1.0);
}

} // namespace

TEST_CASE("occupation at 1 GHz and 20 mK")
{
    const AbsorberParams ghz;
    const double n = thermal_occupation(ghz, 0.020);
    CHECK(n == doctest::Approx(0.0998).epsilon(5e-4));
    CHECK(n == doctest::Approx(occupation_direct(1e9, 0.020)).epsilon(1e-12));
    CHECK(ghz.energy_temperature() == doctest::Approx(0.04799).epsilon(1e-4));
}

TEST_CASE("occupation vanishes as T goes to zero")
{
    const AbsorberParams ghz;
    CHECK(thermal_occupation(ghz, 1e-4) < 1e-200);
    CHECK(thermal_occupation(ghz, 1e-6) == 0.0);
    CHECK(occupation_derivative(ghz, 1e-6) == 0.0);
}

TEST_CASE("non-positive temperature is rejected")
{
    const AbsorberParams ghz;
    CHECK_THROWS_AS(thermal_occupation(ghz, 0.0), DomainError);
    CHECK_THROWS_AS(thermal_occupation(ghz, -0.01), DomainError);
    CHECK_THROWS_AS(occupation_derivative(ghz, 0.0), DomainError);
    CHECK_THROWS_AS(occupation_derivative(ghz, -1.0, DerivativeMode::low_t_approx), DomainError);
    CHECK_THROWS_AS(thermal_occupation(ghz, std::nan("")), DomainError);
}

TEST_CASE("invalid mode frequency is rejected")
{
    AbsorberParams bad;
    bad.omega_a = 0.0;
    CHECK_THROWS_AS(bad.validate(), DomainError);
    CHECK_THROWS_AS(thermal_occupation(bad, 0.02), DomainError);
    CHECK(AbsorberParams::from_frequency_hz(2e9).omega_a == doctest::Approx(2.0 * M_PI * 2e9));
}

TEST_CASE("occupation is strictly increasing on 1 mK to 1 K")
{
    const AbsorberParams ghz;
    double prev = thermal_occupation(ghz, 0.010);
    for (int i = 1; i <= 400; ++i) {
        const double t = 0.010 + 0.99 * i / 400.0;
        const double n = thermal_occupation(ghz, t);
        REQUIRE(n > prev);
        prev = n;
    }
}

TEST_CASE("exact derivative against a fixed-step central difference at 20 mK")
{
    const AbsorberParams ghz;
    const double t = 0.020;
    const double h = 1e-7;
    const double fd = (thermal_occupation(ghz, t + h) - thermal_occupation(ghz, t - h)) / (2 * h);
    const double exact = occupation_derivative(ghz, t);
    CHECK(exact > 0.0);
    CHECK(testsupport::relative_error(exact, fd) < 1e-8);
}

TEST_CASE("exact derivative matches finite differences across 1 mK to 1 K")
{
    const AbsorberParams ghz;
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> logt(std::log(0.005), std::log(1.0));
    for (int i = 0; i < 200; ++i) {
        const double t = std::exp(logt(gen));
        const auto f = [&](double x) { return thermal_occupation(ghz, x); };
        const double fd = testsupport::richardson_derivative(f, t);
        CHECK(testsupport::relative_error(occupation_derivative(ghz, t), fd) < 1e-6);
    }
}

TEST_CASE("low-temperature derivative approaches the exact one")
{
    const AbsorberParams ghz;
    // Temperature where the occupation is exactly 0.01.
    const double t = ghz.energy_temperature() / std::log(101.0);
    CHECK(thermal_occupation(ghz, t) == doctest::Approx(0.01).epsilon(1e-12));
    const double ratio = occupation_derivative(ghz, t, DerivativeMode::low_t_approx) /
                         occupation_derivative(ghz, t, DerivativeMode::exact);
    CHECK(std::abs(ratio - 1.0) < 0.01);
    CHECK(occupation_derivative(ghz, t, DerivativeMode::low_t_approx) > 0.0);
    // Ratio is 1/(1+n): tends to one as the occupation falls.
    const double colder = occupation_derivative(ghz, 0.008, DerivativeMode::low_t_approx) /
                          occupation_derivative(ghz, 0.008, DerivativeMode::exact);
    CHECK(std::abs(colder - 1.0) < std::abs(ratio - 1.0));
}

TEST_CASE("occupation variance modes")
{
    CHECK(occupation_variance(0.0, VarianceMode::exact) == 0.0);
    CHECK(occupation_variance(0.0, VarianceMode::approximate) == 0.0);
    CHECK(occupation_variance(0.1, VarianceMode::exact) == doctest::Approx(0.11));
    CHECK(occupation_variance(0.1, VarianceMode::approximate) == 0.1);
    CHECK_THROWS_AS(occupation_variance(-0.1, VarianceMode::exact), DomainError);
    for (double n : {1e-6, 0.01, 0.3, 2.0}) {
        CHECK(occupation_variance(n, VarianceMode::approximate) <
              occupation_variance(n, VarianceMode::exact));
    }
    CHECK(occupation_variance_derivative(0.1, 2.0, VarianceMode::exact) == doctest::Approx(2.4));
    CHECK(occupation_variance_derivative(0.1, 2.0, VarianceMode::approximate) == 2.0);
}

TEST_CASE("constants are the fixed CODATA values")
{
    static_assert(PhysicalConstants::hbar == 1.054571817e-34);
    static_assert(PhysicalConstants::k_boltzmann == 1.380649e-23);
    CHECK(PhysicalConstants::two_pi == doctest::Approx(2.0 * M_PI));
}
