#include <doctest.h>

#include <cmath>
#include <cstring>

#include "combsense/errors.hpp"
#include "combsense/grids.hpp"
#include "combsense/parallel.hpp"
#include "combsense/reference.hpp"

using namespace combsense;
using namespace combsense::kernel_forms;

namespace {

bool same_bits(double a, double b)
{
    return std::memcmp(&a, &b, sizeof a) == 0;
}

bool same_cell(const QfiBreakdown& a, const QfiBreakdown& b)
{
    return same_bits(a.f1_tooth1, b.f1_tooth1) && same_bits(a.f1_tooth2, b.f1_tooth2) &&
           same_bits(a.f2, b.f2) && same_bits(a.advantage, b.advantage) &&
           same_bits(a.advantage_weak_limit, b.advantage_weak_limit) &&
           same_bits(a.advantage_approx, b.advantage_approx) && same_bits(a.k_tilde, b.k_tilde) &&
           same_bits(a.dk_tilde_dT, b.dk_tilde_dT) && same_bits(a.gamma_phi2, b.gamma_phi2);
}

const MapSpec fig2_spec{CombConfig::from_coupling(0.05, 0.0), AbsorberParams{},
                        LorentzianCrossover{{6.0, 0.01, 0.020, 8.0}}, Regime::weak};

} // namespace

TEST_CASE("grid helpers")
{
    const auto lin = linear_grid(10.0, 50.0, 5);
    CHECK(lin == std::vector<double>{10.0, 20.0, 30.0, 40.0, 50.0});
    const auto lg = log_grid(1e-2, 1e2, 5);
    CHECK(lg.front() == doctest::Approx(1e-2));
    CHECK(lg[2] == doctest::Approx(1.0));
    CHECK(lg.back() == doctest::Approx(1e2));
    CHECK(linear_grid(3.0, 3.0, 1) == std::vector<double>{3.0});
    CHECK_THROWS_AS(linear_grid(1.0, 0.0, 3), DomainError);
    CHECK_THROWS_AS(linear_grid(0.0, 1.0, 0), DomainError);
    CHECK_THROWS_AS(log_grid(0.0, 1.0, 3), DomainError);
}

TEST_CASE("parallel map is bit-identical to the serial reference")
{
    const auto temps = linear_grid(0.010, 0.050, 13);
    const auto delays = log_grid(1e-2, 1e2, 41);
    const auto serial = reference::efficiency_map(fig2_spec, temps, delays);
    for (int threads : {1, 2, 4}) {
        parallel::set_thread_count(threads);
        const auto par = efficiency_map(fig2_spec, temps, delays);
        REQUIRE(par.cells.size() == serial.cells.size());
        for (std::size_t i = 0; i < par.cells.size(); ++i) {
            REQUIRE(same_cell(par.cells[i], serial.cells[i]));
        }
    }
    parallel::set_thread_count(0);
}

TEST_CASE("singular cells become missing values")
{
    // At 1 mK the occupation underflows and the one-tooth QFIs vanish.
    const auto map = efficiency_map(fig2_spec, {1e-4, 0.03}, {0.1, 1.0});
    CHECK(std::isnan(map.at(0, 0).advantage));
    CHECK(std::isnan(map.at(0, 1).f2));
    CHECK(std::isfinite(map.at(1, 0).advantage));
    const auto minima = advantage_minima(map);
    CHECK(std::isnan(minima[0].delta));
    CHECK(std::isfinite(minima[1].delta));
}

TEST_CASE("invalid cells propagate as exceptions out of the parallel region")
{
    MapSpec overlapping = fig2_spec;
    overlapping.comb = CombConfig{0.5, 3.0, 3.0, 1.0, 0.0};
    CHECK_THROWS_AS(efficiency_map(overlapping, {0.02}, {1.0, 10.0}), DomainError);
}

TEST_CASE("deterministic sum ignores thread count")
{
    std::vector<double> v(100003);
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = std::sin(0.37 * static_cast<double>(i)) * 1e3 + 1e-3 * static_cast<double>(i % 7);
    }
    const double serial = parallel::deterministic_sum(v, parallel::Execution::serial);
    for (int threads : {1, 3, 8}) {
        parallel::set_thread_count(threads);
        CHECK(same_bits(parallel::deterministic_sum(v), serial));
    }
    parallel::set_thread_count(0);
    CHECK(parallel::deterministic_sum(std::vector<double>{}) == 0.0);
    CHECK(parallel::thread_count() >= 1);
}
