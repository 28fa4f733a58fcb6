#pragma once

// Two-tooth noise spectroscopy: visibility -> kernel -> spectrum.
//
// Delays in tau0, angular frequencies in rad/tau0.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace combsense {

struct SweepMeta {
    double lambda = 0.5;
    double tau1 = 3.0;
    double tau2 = 3.0;
    double alpha_sq = 1.0;
    double variance = 1.0;
    std::optional<double> probe_gamma;  // 1/tau0

    void validate() const;
    // lambda^2 (tau1^2 + tau2^2) Var: the delay-independent exponent.
    double baseline_exponent() const noexcept;
    // 2 lambda^2 tau1 tau2: exponent per unit kernel.
    double correlation_weight() const noexcept;
};

enum class PointStatus { ok, invalid_visibility, unreliable_calibration };

struct DelaySweep {
    std::vector<double> delays;
    std::vector<double> visibility;
    SweepMeta meta;
    bool calibration_applied = false;
    std::vector<PointStatus> status;  // empty means every point is usable

    void validate() const;
    PointStatus point_status(std::size_t i) const;
};

struct KernelEstimate {
    std::vector<double> delays;
    std::vector<double> k_hat;
    std::vector<PointStatus> status;
    SweepMeta meta;
    bool debias_applied = false;
    bool calibration_applied = false;

    std::size_t flagged_count() const;
};

struct SpectrumEstimate {
    std::vector<double> omegas;
    std::vector<double> s_nn;
    bool normalized = false;
    double ir_cutoff = 0.0;   // ~ 1 / delta_max, rad/tau0
    double uv_cutoff = 0.0;   // ~ 1 / delta_min, rad/tau0
    std::size_t points_used = 0;
    std::size_t negative_count = 0;  // truncation ringing, retained
};

enum class Baseline {
    analytic,   // subtract lambda^2 (tau1^2 + tau2^2) Var from meta
    asymptote,  // normalize by the longest-delay visibility
};

enum class Quadrature {
    // Kernel linear between samples, cosine weights integrated exactly.
    linear_exact_cosine,
    // Plain trapezoid on K cos(omega delta); aliases once omega * step ~ 1.
    trapezoid,
};

// K = -[ln C / |alpha|^2 + lambda^2 (tau1^2 + tau2^2) Var] / (2 lambda^2 tau1 tau2)
KernelEstimate invert_visibility(const DelaySweep& sweep, Baseline baseline = Baseline::analytic);

// Divides the two-tooth visibility by probe_curve^2 (probe measured with the
// absorber decoupled). Points whose probe visibility is below `floor` are
// flagged unreliable.
DelaySweep calibrate_probe(const DelaySweep& sweep, const DelaySweep& probe_curve,
                           double floor = 1.0e-3);

// Removes the linear-in-delay bias gamma_p delta / (|alpha|^2 lambda^2 tau1 tau2)
// left by uncorrected exponential probe dephasing.
KernelEstimate debias_linear(const KernelEstimate& estimate, double probe_gamma);

// S(omega) = 2 int_{delta_min}^{delta_max} K(delta) cos(omega delta) d delta over
// the usable points of the estimate. Per-frequency work runs in parallel.
SpectrumEstimate cosine_transform(const KernelEstimate& estimate, std::span<const double> omegas,
                                  Quadrature rule = Quadrature::linear_exact_cosine);

SpectrumEstimate normalize_spectrum(const SpectrumEstimate& spectrum);

// 120 log-spaced frequencies over [1e-4, 1e2] cycles/tau0, returned in rad/tau0.
std::vector<double> default_omega_grid();

// Synthetic weak-regime sweep of the two-tooth visibility for a given kernel
// shape (values of Ktilde at `delays`), optionally including probe dephasing.
DelaySweep synthesize_sweep(std::span<const double> delays, std::span<const double> k_tilde,
                            const SweepMeta& meta);

namespace detail {
// Single-frequency quadrature shared by the parallel and reference paths.
double cosine_integral(std::span<const double> delays, std::span<const double> values,
                       double omega, Quadrature rule);
} // namespace detail

} // namespace combsense
