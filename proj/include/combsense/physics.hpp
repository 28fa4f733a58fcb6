#pragma once

// Thermal statistics of the absorber mode. Temperatures are kelvin.

namespace combsense {

struct PhysicalConstants {
    static constexpr double hbar = 1.054571817e-34;       // J s (CODATA 2018)
    static constexpr double k_boltzmann = 1.380649e-23;    // J/K (exact)
    static constexpr double two_pi = 6.283185307179586476925;
};

enum class VarianceMode { approximate, exact };
enum class DerivativeMode { exact, low_t_approx };

struct AbsorberParams {
    double omega_a = PhysicalConstants::two_pi * 1.0e9;  // rad/s
    VarianceMode variance_mode = VarianceMode::approximate;

    static AbsorberParams from_frequency_hz(double f_hz,
                                            VarianceMode mode = VarianceMode::approximate);

    // hbar * omega_a / k_B, in kelvin.
    double energy_temperature() const noexcept;
    void validate() const;
};

// Bose-Einstein occupation 1/(exp(hbar w / k T) - 1).
double thermal_occupation(const AbsorberParams& params, double temperature);

double occupation_derivative(const AbsorberParams& params, double temperature,
                             DerivativeMode mode = DerivativeMode::exact);

// Var(n_a): n(1+n) in exact mode, n in approximate mode.
double occupation_variance(double n_bar, VarianceMode mode);

// d Var(n_a) / dT given n and dn/dT.
double occupation_variance_derivative(double n_bar, double dn_bar_dT, VarianceMode mode);

} // namespace combsense
