#include "combsense/spectroscopy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "combsense/coherence.hpp"
#include "combsense/errors.hpp"
#include "combsense/kernels.hpp"

namespace combsense {

void SweepMeta::validate() const
{
    if (!(lambda > 0.0) || !(tau1 > 0.0) || !(tau2 > 0.0) || !(alpha_sq > 0.0)) {
        throw DomainError("sweep meta needs positive lambda, tau1, tau2 and alpha_sq");
    }
    if (!(variance >= 0.0)) {
        throw DomainError("sweep meta variance must be non-negative");
    }
    if (probe_gamma && !(*probe_gamma >= 0.0)) {
        throw DomainError("probe dephasing rate must be non-negative");
    }
}

double SweepMeta::baseline_exponent() const noexcept
{
    return lambda * lambda * (tau1 * tau1 + tau2 * tau2) * variance;
}

double SweepMeta::correlation_weight() const noexcept
{
    return 2.0 * lambda * lambda * tau1 * tau2;
}

void DelaySweep::validate() const
{
    if (delays.size() != visibility.size()) {
        throw DomainError("sweep delays and visibilities differ in length");
    }
    if (!status.empty() && status.size() != delays.size()) {
        throw DomainError("sweep status length mismatch");
    }
    for (std::size_t i = 0; i < delays.size(); ++i) {
        if (!(delays[i] >= 0.0)) {
            throw DomainError("sweep delays must be non-negative");
        }
        if (i > 0 && !(delays[i] > delays[i - 1])) {
            throw DomainError("sweep delays must be strictly increasing");
        }
    }
    meta.validate();
}

PointStatus DelaySweep::point_status(std::size_t i) const
{
    return status.empty() ? PointStatus::ok : status[i];
}

std::size_t KernelEstimate::flagged_count() const
{
    return static_cast<std::size_t>(
        std::count_if(status.begin(), status.end(), [](PointStatus s) { return s != PointStatus::ok; }));
}

KernelEstimate invert_visibility(const DelaySweep& sweep, Baseline baseline)
{
    sweep.validate();
    const auto& meta = sweep.meta;

    double offset = meta.baseline_exponent();
    if (baseline == Baseline::asymptote) {
        if (sweep.visibility.empty()) {
            throw InsufficientDataError("asymptote baseline needs at least one point");
        }
        const double c_inf = sweep.visibility.back();
        if (!(c_inf > 0.0 && c_inf <= 1.0) || sweep.point_status(sweep.visibility.size() - 1) != PointStatus::ok) {
            throw DomainError("long-delay visibility is unusable as a baseline");
        }
        offset = -std::log(c_inf) / meta.alpha_sq;
    }

    KernelEstimate est;
    est.delays = sweep.delays;
    est.meta = meta;
    est.calibration_applied = sweep.calibration_applied;
    est.k_hat.resize(sweep.delays.size());
    est.status.resize(sweep.delays.size(), PointStatus::ok);

    const double weight = meta.correlation_weight();
    for (std::size_t i = 0; i < sweep.delays.size(); ++i) {
        const double c = sweep.visibility[i];
        const auto st = sweep.point_status(i);
        if (st != PointStatus::ok) {
            est.status[i] = st;
            est.k_hat[i] = std::nan("");
            continue;
        }
        if (!(c > 0.0 && c <= 1.0)) {
            est.status[i] = PointStatus::invalid_visibility;
            est.k_hat[i] = std::nan("");
            continue;
        }
        est.k_hat[i] = -(std::log(c) / meta.alpha_sq + offset) / weight;
    }
    return est;
}

DelaySweep calibrate_probe(const DelaySweep& sweep, const DelaySweep& probe_curve, double floor)
{
    sweep.validate();
    if (probe_curve.delays.size() != probe_curve.visibility.size() || probe_curve.delays.empty()) {
        throw DomainError("probe curve must be non-empty with matching columns");
    }
    const bool same_grid = probe_curve.delays == sweep.delays;

    DelaySweep out = sweep;
    out.calibration_applied = true;
    out.status.assign(sweep.delays.size(), PointStatus::ok);
    for (std::size_t i = 0; i < sweep.delays.size(); ++i) {
        out.status[i] = sweep.point_status(i);
        const double cp = same_grid
                              ? probe_curve.visibility[i]
                              : interpolate_log_delay(probe_curve.delays, probe_curve.visibility,
                                                      sweep.delays[i]);
        if (!(cp >= floor)) {
            out.status[i] = PointStatus::unreliable_calibration;
            out.visibility[i] = std::nan("");
            continue;
        }
        out.visibility[i] = sweep.visibility[i] / (cp * cp);
    }
    if (std::all_of(out.status.begin(), out.status.end(), [](PointStatus s) { return s == PointStatus::ok; })) {
        out.status.clear();
    }
    return out;
}

KernelEstimate debias_linear(const KernelEstimate& estimate, double probe_gamma)
{
    if (estimate.debias_applied) {
        throw StateError("linear probe-dephasing bias already removed");
    }
    if (!(probe_gamma >= 0.0)) {
        throw DomainError("probe dephasing rate must be non-negative");
    }
    KernelEstimate out = estimate;
    out.debias_applied = true;
    if (probe_gamma == 0.0) {
        return out;
    }
    const auto& m = estimate.meta;
    const double slope = probe_gamma / (m.alpha_sq * m.lambda * m.lambda * m.tau1 * m.tau2);
    for (std::size_t i = 0; i < out.k_hat.size(); ++i) {
        out.k_hat[i] -= slope * out.delays[i];
    }
    return out;
}

namespace detail {

double cosine_integral(std::span<const double> delays, std::span<const double> values,
                       double omega, Quadrature rule)
{
    const std::size_t n = delays.size();
    double sum = 0.0;
    if (rule == Quadrature::trapezoid || omega == 0.0) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double h = delays[i + 1] - delays[i];
            sum += 0.5 * h * (values[i] * std::cos(omega * delays[i]) +
                              values[i + 1] * std::cos(omega * delays[i + 1]));
        }
        return 2.0 * sum;
    }
    // Integration by parts of the piecewise-linear kernel against cos:
    //   [K sin(w x)/w] - sum_i dK_i sin(w m_i) sinc(w h_i / 2) / w
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = delays[i + 1] - delays[i];
        const double mid = 0.5 * (delays[i + 1] + delays[i]);
        const double half = 0.5 * omega * h;
        const double sinc = std::sin(half) / half;
        sum += (values[i + 1] - values[i]) * std::sin(omega * mid) * sinc;
    }
    const double boundary = values[n - 1] * std::sin(omega * delays[n - 1]) -
                            values[0] * std::sin(omega * delays[0]);
    return 2.0 * (boundary - sum) / omega;
}

} // namespace detail

namespace {

struct UsableKernel {
    std::vector<double> delays;
    std::vector<double> values;
};

UsableKernel usable_points(const KernelEstimate& est)
{
    if (est.delays.size() != est.k_hat.size()) {
        throw DomainError("kernel estimate columns differ in length");
    }
    UsableKernel u;
    for (std::size_t i = 0; i < est.delays.size(); ++i) {
        const bool ok = est.status.empty() || est.status[i] == PointStatus::ok;
        if (ok && std::isfinite(est.k_hat[i])) {
            u.delays.push_back(est.delays[i]);
            u.values.push_back(est.k_hat[i]);
        }
    }
    if (u.delays.size() < 4) {
        throw InsufficientDataError("cosine transform needs at least 4 usable delay points");
    }
    return u;
}

void check_omegas(std::span<const double> omegas)
{
    for (std::size_t i = 0; i < omegas.size(); ++i) {
        if (!(omegas[i] > 0.0) || (i > 0 && !(omegas[i] > omegas[i - 1]))) {
            throw DomainError("frequencies must be positive and strictly increasing");
        }
    }
}

} // namespace

SpectrumEstimate cosine_transform(const KernelEstimate& estimate, std::span<const double> omegas,
                                  Quadrature rule)
{
    check_omegas(omegas);
    const auto usable = usable_points(estimate);

    SpectrumEstimate spec;
    spec.omegas.assign(omegas.begin(), omegas.end());
    spec.s_nn.resize(omegas.size());
    spec.points_used = usable.delays.size();
    spec.ir_cutoff = 1.0 / usable.delays.back();
    spec.uv_cutoff = usable.delays.front() > 0.0 ? 1.0 / usable.delays.front()
                                                 : 1.0 / usable.delays[1];

    const auto count = static_cast<std::ptrdiff_t>(omegas.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t j = 0; j < count; ++j) {
        spec.s_nn[static_cast<std::size_t>(j)] =
            detail::cosine_integral(usable.delays, usable.values, omegas[static_cast<std::size_t>(j)], rule);
    }
    spec.negative_count = static_cast<std::size_t>(
        std::count_if(spec.s_nn.begin(), spec.s_nn.end(), [](double v) { return v < 0.0; }));
    return spec;
}

SpectrumEstimate normalize_spectrum(const SpectrumEstimate& spectrum)
{
    double peak = 0.0;
    for (double v : spectrum.s_nn) {
        peak = std::max(peak, v);
    }
    if (!(peak > 0.0)) {
        throw DomainError("cannot normalize a spectrum without a positive maximum");
    }
    SpectrumEstimate out = spectrum;
    for (double& v : out.s_nn) {
        v /= peak;
    }
    out.normalized = true;
    return out;
}

std::vector<double> default_omega_grid()
{
    constexpr std::size_t count = 120;
    std::vector<double> omegas(count);
    const double lo = -4.0;
    const double hi = 2.0;
    for (std::size_t i = 0; i < count; ++i) {
        const double e = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
        omegas[i] = 2.0 * std::numbers::pi * std::pow(10.0, e);
    }
    return omegas;
}

DelaySweep synthesize_sweep(std::span<const double> delays, std::span<const double> k_tilde,
                            const SweepMeta& meta)
{
    meta.validate();
    if (delays.size() != k_tilde.size()) {
        throw DomainError("delays and kernel values differ in length");
    }
    DelaySweep sweep;
    sweep.meta = meta;
    sweep.delays.assign(delays.begin(), delays.end());
    sweep.visibility.resize(delays.size());
    // The envelope is evaluated from the kernel value directly, so the
    // config carries no delay (teeth are treated as point samples here).
    const CombConfig cfg{meta.lambda, meta.tau1, meta.tau2, meta.alpha_sq, 0.0};
    const ProbeDephasing probe{meta.probe_gamma.value_or(0.0)};
    for (std::size_t i = 0; i < delays.size(); ++i) {
        const double c2 = coherence_two_from_variance(cfg, meta.variance, meta.variance * k_tilde[i],
                                                      Regime::weak);
        const double cp = probe_envelope(probe, delays[i]);
        sweep.visibility[i] = cp * cp * c2;
    }
    sweep.validate();
    return sweep;
}

} // namespace combsense
