#include "combsense/grids.hpp"

#include <cmath>
#include <exception>
#include <limits>

#include "combsense/errors.hpp"

namespace combsense {

std::vector<double> linear_grid(double lo, double hi, std::size_t count)
{
    if (count == 0 || !(hi >= lo) || (count == 1 && hi != lo)) {
        throw DomainError("degenerate linear grid");
    }
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i) {
        g[i] = count == 1 ? lo
                          : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return g;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count)
{
    if (!(lo > 0.0)) {
        throw DomainError("logarithmic grid needs a positive lower bound");
    }
    auto exponents = linear_grid(std::log10(lo), std::log10(hi), count);
    for (double& e : exponents) {
        e = std::pow(10.0, e);
    }
    return exponents;
}

QfiBreakdown missing_breakdown()
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    QfiBreakdown b;
    b.f1_tooth1 = b.f1_tooth2 = b.f2 = nan;
    b.advantage = b.advantage_weak_limit = b.advantage_approx = nan;
    b.s_nbar = b.s_kernel = b.variance_gain = b.responsivity_factor = nan;
    b.k_tilde = b.dk_tilde_dT = b.gamma_phi2 = nan;
    return b;
}

QfiBreakdown efficiency_cell(const MapSpec& spec, double temperature, double delta)
{
    try {
        return memory_efficiency(spec.comb.with_delay(delta), temperature, spec.absorber,
                                 spec.kernel, spec.regime);
    } catch (const SingularVisibilityError&) {
        return missing_breakdown();
    } catch (const DegenerateProtocolError&) {
        return missing_breakdown();
    }
}

EfficiencyMap efficiency_map(const MapSpec& spec, const std::vector<double>& temperatures,
                             const std::vector<double>& delays)
{
    EfficiencyMap map{temperatures, delays, {}};
    map.cells.resize(temperatures.size() * delays.size());

    const auto nt = static_cast<std::ptrdiff_t>(temperatures.size());
    const auto nd = static_cast<std::ptrdiff_t>(delays.size());
    std::exception_ptr failure;
#pragma omp parallel for collapse(2) schedule(static)
    for (std::ptrdiff_t ti = 0; ti < nt; ++ti) {
        for (std::ptrdiff_t di = 0; di < nd; ++di) {
            try {
                map.cells[static_cast<std::size_t>(ti * nd + di)] =
                    efficiency_cell(spec, temperatures[static_cast<std::size_t>(ti)],
                                    delays[static_cast<std::size_t>(di)]);
            } catch (...) {
#pragma omp critical(combsense_map_failure)
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return map;
}

std::vector<DelayMinimum> advantage_minima(const EfficiencyMap& map)
{
    std::vector<DelayMinimum> out;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t ti = 0; ti < map.temperatures.size(); ++ti) {
        DelayMinimum m{map.temperatures[ti], nan, nan};
        for (std::size_t di = 0; di < map.delays.size(); ++di) {
            const double a = map.at(ti, di).advantage;
            if (std::isnan(a)) {
                continue;
            }
            if (std::isnan(m.advantage) || a < m.advantage) {
                m.advantage = a;
                m.delta = map.delays[di];
            }
        }
        out.push_back(m);
    }
    return out;
}

} // namespace combsense
