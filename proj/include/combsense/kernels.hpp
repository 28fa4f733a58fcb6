#pragma once

// Memory-kernel models K(delta; T) = Var(n_a) * Ktilde(delta, T).
//
// Delays and correlation times are in units of the reference time tau0;
// temperatures are kelvin; angular frequencies are rad/tau0.

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace combsense {

// tau_c(T) = (tau_max + tau_min r) / (1 + r),  r = (T / T_c)^gamma
struct CorrelationTimeModel {
    double tau_max = 6.0;
    double tau_min = 0.01;
    double t_c = 0.020;   // kelvin
    double gamma = 8.0;

    void validate() const;
};

double correlation_time(const CorrelationTimeModel& model, double temperature);
double correlation_time_derivative(const CorrelationTimeModel& model, double temperature);

namespace kernel_forms {

struct LorentzianCrossover {
    CorrelationTimeModel ct_model;
};

struct LorentzianFixed {
    double tau_c = 10.0;
};

// exp(-(delta / sigma_w)^2)
struct GaussianWhite {
    double sigma_w = 1.0e-3;
};

// 1 / (1 + (delta / tau_f)^alpha),  0 < alpha < 1
struct OneOverF {
    double tau_f = 0.1;
    double alpha = 0.6;
};

// Linear interpolation in log(delay); clamped at both ends.
struct Tabulated {
    std::vector<double> delays;
    std::vector<double> values;
};

} // namespace kernel_forms

using KernelModel = std::variant<kernel_forms::LorentzianCrossover,
                                 kernel_forms::LorentzianFixed,
                                 kernel_forms::GaussianWhite,
                                 kernel_forms::OneOverF,
                                 kernel_forms::Tabulated>;

void validate(const KernelModel& model);
std::string_view kernel_name(const KernelModel& model);
bool is_temperature_dependent(const KernelModel& model);

struct KernelSample {
    double value;
    bool clamped;  // tabulated query fell below the first grid point
};

KernelSample normalized_kernel_sample(const KernelModel& model, double delta, double temperature);
double normalized_kernel(const KernelModel& model, double delta, double temperature);

double kernel(const KernelModel& model, double delta, double temperature, double variance);

// d Ktilde / dT. Analytic for the crossover model, zero for temperature
// independent forms.
double kernel_dT(const KernelModel& model, double delta, double temperature);

// Central difference with h = max(1e-6 K, 1e-6 T).
double kernel_dT_finite_difference(const KernelModel& model, double delta, double temperature);

// Closed-form S(omega) = integral over the real line of K(delta) e^{i omega delta}.
// The crossover form needs the temperature at which to freeze tau_c.
double analytic_spectrum(const KernelModel& model, double omega, double variance,
                         double temperature = 0.0);

// Piecewise-linear interpolation in log(x) over a strictly increasing
// positive grid, clamped to the end values outside it.
double interpolate_log_delay(std::span<const double> grid, std::span<const double> values,
                             double x);

// Two-column CSV (delay, value) with a one-line header.
kernel_forms::Tabulated load_tabulated_kernel(const std::filesystem::path& path);
kernel_forms::Tabulated parse_tabulated_kernel(std::string_view text);

} // namespace combsense
