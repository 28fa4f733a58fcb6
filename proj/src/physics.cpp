#include "combsense/physics.hpp"

#include <cmath>
#include <string>

#include "combsense/errors.hpp"

namespace combsense {

namespace {

void require_positive_temperature(double temperature)
{
    if (!(temperature > 0.0) || !std::isfinite(temperature)) {
        throw DomainError("temperature must be positive and finite, got " +
                          std::to_string(temperature));
    }
}

} // namespace

AbsorberParams AbsorberParams::from_frequency_hz(double f_hz, VarianceMode mode)
{
    AbsorberParams p{PhysicalConstants::two_pi * f_hz, mode};
    p.validate();
    return p;
}

double AbsorberParams::energy_temperature() const noexcept
{
    return PhysicalConstants::hbar * omega_a / PhysicalConstants::k_boltzmann;
}

void AbsorberParams::validate() const
{
    if (!(omega_a > 0.0) || !std::isfinite(omega_a)) {
        throw DomainError("absorber angular frequency must be positive");
    }
}

double thermal_occupation(const AbsorberParams& params, double temperature)
{
    params.validate();
    require_positive_temperature(temperature);
    const double x = params.energy_temperature() / temperature;
    // expm1 keeps full precision at high temperature; large x underflows to 0.
    return 1.0 / std::expm1(x);
}

double occupation_derivative(const AbsorberParams& params, double temperature,
                             DerivativeMode mode)
{
    const double n = thermal_occupation(params, temperature);
    const double x = params.energy_temperature() / temperature;
    // dn/dT = (x/T) e^x/(e^x-1)^2 = (x/T) n (1+n)
    if (mode == DerivativeMode::low_t_approx) {
        return x / temperature * n;
    }
    return x / temperature * n * (1.0 + n);
}

double occupation_variance(double n_bar, VarianceMode mode)
{
    if (!(n_bar >= 0.0)) {
        throw DomainError("occupation must be non-negative");
    }
    return mode == VarianceMode::exact ? n_bar * (1.0 + n_bar) : n_bar;
}

double occupation_variance_derivative(double n_bar, double dn_bar_dT, VarianceMode mode)
{
    if (!(n_bar >= 0.0)) {
        throw DomainError("occupation must be non-negative");
    }
    return mode == VarianceMode::exact ? (1.0 + 2.0 * n_bar) * dn_bar_dT : dn_bar_dT;
}

} // namespace combsense
