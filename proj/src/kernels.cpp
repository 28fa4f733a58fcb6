#include "combsense/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "combsense/csv.hpp"
#include "combsense/errors.hpp"

namespace combsense {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_positive(double value, const char* what)
{
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw DomainError(std::string(what) + " must be positive and finite");
    }
}

void require_delay(double delta)
{
    if (!(delta >= 0.0)) {
        throw DomainError("delay must be non-negative");
    }
}

} // namespace

void CorrelationTimeModel::validate() const
{
    require_positive(tau_min, "tau_min");
    require_positive(t_c, "T_c");
    require_positive(gamma, "gamma");
    if (!(tau_max > tau_min) || !std::isfinite(tau_max)) {
        throw DomainError("tau_max must exceed tau_min");
    }
}

double correlation_time(const CorrelationTimeModel& model, double temperature)
{
    model.validate();
    require_positive(temperature, "temperature");
    const double r = std::pow(temperature / model.t_c, model.gamma);
    if (std::isinf(r)) {
        return model.tau_min;
    }
    return (model.tau_max + model.tau_min * r) / (1.0 + r);
}

double correlation_time_derivative(const CorrelationTimeModel& model, double temperature)
{
    model.validate();
    require_positive(temperature, "temperature");
    const double r = std::pow(temperature / model.t_c, model.gamma);
    if (std::isinf(r)) {
        return 0.0;
    }
    // d tau_c/dr = (tau_min - tau_max)/(1+r)^2,  dr/dT = gamma r / T
    const double dr_dT = model.gamma * r / temperature;
    const double one_plus_r = 1.0 + r;
    return (model.tau_min - model.tau_max) * dr_dT / (one_plus_r * one_plus_r);
}

void validate(const KernelModel& model)
{
    std::visit(overloaded{
                   [](const kernel_forms::LorentzianCrossover& m) { m.ct_model.validate(); },
                   [](const kernel_forms::LorentzianFixed& m) { require_positive(m.tau_c, "tau_c"); },
                   [](const kernel_forms::GaussianWhite& m) { require_positive(m.sigma_w, "sigma_w"); },
                   [](const kernel_forms::OneOverF& m) {
                       require_positive(m.tau_f, "tau_f");
                       if (!(m.alpha > 0.0 && m.alpha < 1.0)) {
                           throw DomainError("1/f exponent must lie in (0, 1)");
                       }
                   },
                   [](const kernel_forms::Tabulated& m) {
                       if (m.delays.size() != m.values.size() || m.delays.empty()) {
                           throw DomainError("tabulated kernel needs equal, non-empty columns");
                       }
                       require_positive(m.delays.front(), "first tabulated delay");
                       for (std::size_t i = 1; i < m.delays.size(); ++i) {
                           if (!(m.delays[i] > m.delays[i - 1])) {
                               throw DomainError("tabulated delays must be strictly increasing");
                           }
                       }
                       if (m.values.front() != 1.0) {
                           throw DomainError("tabulated kernel must be normalized (first value 1)");
                       }
                       for (double v : m.values) {
                           if (!(v >= 0.0 && v <= 1.0)) {
                               throw DomainError("tabulated kernel values must lie in [0, 1]");
                           }
                       }
                   },
               },
               model);
}

std::string_view kernel_name(const KernelModel& model)
{
    return std::visit(overloaded{
                          [](const kernel_forms::LorentzianCrossover&) { return "lorentzian_crossover"; },
                          [](const kernel_forms::LorentzianFixed&) { return "lorentzian_fixed"; },
                          [](const kernel_forms::GaussianWhite&) { return "gaussian_white"; },
                          [](const kernel_forms::OneOverF&) { return "one_over_f"; },
                          [](const kernel_forms::Tabulated&) { return "tabulated"; },
                      },
                      model);
}

bool is_temperature_dependent(const KernelModel& model)
{
    return std::holds_alternative<kernel_forms::LorentzianCrossover>(model);
}

double interpolate_log_delay(std::span<const double> grid, std::span<const double> values,
                             double x)
{
    if (grid.empty() || grid.size() != values.size()) {
        throw DomainError("interpolation grid and values must be non-empty and equal length");
    }
    if (x <= grid.front()) {
        return values.front();
    }
    if (x >= grid.back()) {
        return values.back();
    }
    const auto upper = std::upper_bound(grid.begin(), grid.end(), x);
    const auto i = static_cast<std::size_t>(upper - grid.begin()) - 1;
    const double t = std::log(x / grid[i]) / std::log(grid[i + 1] / grid[i]);
    return values[i] + t * (values[i + 1] - values[i]);
}

KernelSample normalized_kernel_sample(const KernelModel& model, double delta, double temperature)
{
    require_delay(delta);
    return std::visit(
        overloaded{
            [&](const kernel_forms::LorentzianCrossover& m) {
                const double tau = correlation_time(m.ct_model, temperature);
                return KernelSample{std::exp(-delta / tau), false};
            },
            [&](const kernel_forms::LorentzianFixed& m) {
                require_positive(m.tau_c, "tau_c");
                return KernelSample{std::exp(-delta / m.tau_c), false};
            },
            [&](const kernel_forms::GaussianWhite& m) {
                require_positive(m.sigma_w, "sigma_w");
                const double u = delta / m.sigma_w;
                return KernelSample{std::exp(-u * u), false};
            },
            [&](const kernel_forms::OneOverF& m) {
                require_positive(m.tau_f, "tau_f");
                return KernelSample{1.0 / (1.0 + std::pow(delta / m.tau_f, m.alpha)), false};
            },
            [&](const kernel_forms::Tabulated& m) {
                if (delta == 0.0) {
                    return KernelSample{1.0, false};
                }
                const bool clamped = !m.delays.empty() && delta < m.delays.front();
                return KernelSample{interpolate_log_delay(m.delays, m.values, delta), clamped};
            },
        },
        model);
}

double normalized_kernel(const KernelModel& model, double delta, double temperature)
{
    return normalized_kernel_sample(model, delta, temperature).value;
}

double kernel(const KernelModel& model, double delta, double temperature, double variance)
{
    if (!(variance >= 0.0)) {
        throw DomainError("variance must be non-negative");
    }
    return variance * normalized_kernel(model, delta, temperature);
}

double kernel_dT(const KernelModel& model, double delta, double temperature)
{
    require_delay(delta);
    if (const auto* m = std::get_if<kernel_forms::LorentzianCrossover>(&model)) {
        const double tau = correlation_time(m->ct_model, temperature);
        const double dtau = correlation_time_derivative(m->ct_model, temperature);
        return std::exp(-delta / tau) * (delta / (tau * tau)) * dtau;
    }
    if (!(temperature > 0.0)) {
        throw DomainError("temperature must be positive");
    }
    return 0.0;
}

double kernel_dT_finite_difference(const KernelModel& model, double delta, double temperature)
{
    require_delay(delta);
    require_positive(temperature, "temperature");
    const double h = std::max(1.0e-6, 1.0e-6 * temperature);
    if (!(temperature - h > 0.0) || temperature + h == temperature) {
        throw NumericalError("finite-difference step underflows at this temperature");
    }
    const double up = normalized_kernel(model, delta, temperature + h);
    const double down = normalized_kernel(model, delta, temperature - h);
    return (up - down) / (2.0 * h);
}

double analytic_spectrum(const KernelModel& model, double omega, double variance,
                         double temperature)
{
    if (!(variance >= 0.0)) {
        throw DomainError("variance must be non-negative");
    }
    auto lorentzian = [&](double tau) {
        return 2.0 * variance * tau / (1.0 + omega * omega * tau * tau);
    };
    return std::visit(
        overloaded{
            [&](const kernel_forms::LorentzianCrossover& m) {
                return lorentzian(correlation_time(m.ct_model, temperature));
            },
            [&](const kernel_forms::LorentzianFixed& m) { return lorentzian(m.tau_c); },
            [&](const kernel_forms::GaussianWhite& m) {
                const double s = m.sigma_w;
                return variance * s * std::sqrt(std::numbers::pi) * std::exp(-omega * omega * s * s / 4.0);
            },
            [&](const kernel_forms::OneOverF&) -> double {
                throw UnsupportedModelError("1/f-like kernel has no closed-form spectrum");
            },
            [&](const kernel_forms::Tabulated&) -> double {
                throw UnsupportedModelError("tabulated kernel has no closed-form spectrum");
            },
        },
        model);
}

kernel_forms::Tabulated parse_tabulated_kernel(std::string_view text)
{
    const auto table = csv::parse_numeric(text, 2);
    kernel_forms::Tabulated tab;
    for (const auto& row : table.rows) {
        tab.delays.push_back(row[0]);
        tab.values.push_back(row[1]);
    }
    validate(KernelModel{tab});
    return tab;
}

kernel_forms::Tabulated load_tabulated_kernel(const std::filesystem::path& path)
{
    return parse_tabulated_kernel(csv::read_file(path));
}

} // namespace combsense
