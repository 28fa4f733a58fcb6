#include "combsense/coherence.hpp"

#include <cmath>

#include "combsense/errors.hpp"

namespace combsense {

CombConfig CombConfig::from_coupling(double g, double delta, double alpha_sq,
                                     double tooth_duration)
{
    DimensionlessCoupling{g}.validate();
    CombConfig cfg{std::sqrt(g) / tooth_duration, tooth_duration, tooth_duration, alpha_sq, delta};
    cfg.validate();
    return cfg;
}

CombConfig CombConfig::with_delay(double new_delta) const
{
    CombConfig copy = *this;
    copy.delta = new_delta;
    return copy;
}

void CombConfig::validate() const
{
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw DomainError("cross-Kerr rate must be non-negative");
    }
    if (!(tau1 > 0.0) || !(tau2 > 0.0)) {
        throw DomainError("tooth durations must be positive");
    }
    if (!(alpha_sq > 0.0)) {
        throw DomainError("probe photon number must be positive");
    }
    if (!(delta >= 0.0)) {
        throw DomainError("inter-tooth delay must be non-negative");
    }
    if (delta > 0.0 && tau1 + tau2 > delta) {
        throw DomainError("interaction windows overlap: tau1 + tau2 exceeds the delay");
    }
}

void DimensionlessCoupling::validate() const
{
    if (!(g > 0.0) || !std::isfinite(g)) {
        throw DomainError("dimensionless coupling g must be positive");
    }
}

void ProbeDephasing::validate() const
{
    if (!(gamma_p >= 0.0) || !std::isfinite(gamma_p)) {
        throw DomainError("probe dephasing rate must be non-negative");
    }
}

ThermalState thermal_state(const AbsorberParams& absorber, double temperature,
                           DerivativeMode derivative)
{
    const double n = thermal_occupation(absorber, temperature);
    const double dn = occupation_derivative(absorber, temperature, derivative);
    return {n, dn, occupation_variance(n, absorber.variance_mode),
            occupation_variance_derivative(n, dn, absorber.variance_mode)};
}

double phase_variance_one(double lambda, double tau, double variance)
{
    if (!(variance >= 0.0)) {
        throw DomainError("variance must be non-negative");
    }
    const double lt = lambda * tau;
    return lt * lt * variance;
}

double phase_variance_one(const CombConfig& cfg, Tooth tooth, double variance)
{
    return phase_variance_one(cfg.lambda, cfg.tooth_duration(tooth), variance);
}

double phase_variance_two(const CombConfig& cfg, double variance, double kernel_value)
{
    if (!(variance >= 0.0)) {
        throw DomainError("variance must be non-negative");
    }
    // Cauchy-Schwarz for a stationary process; allow rounding at full correlation.
    if (std::abs(kernel_value) > variance * (1.0 + 1.0e-12)) {
        throw DomainError("kernel exceeds the occupation variance (non-physical)");
    }
    const double l2 = cfg.lambda * cfg.lambda;
    return l2 * ((cfg.tau1 * cfg.tau1 + cfg.tau2 * cfg.tau2) * variance +
                 2.0 * cfg.tau1 * cfg.tau2 * kernel_value);
}

double dephasing_exponent(double sigma_sq, double alpha_sq, Regime regime)
{
    if (!(sigma_sq >= 0.0)) {
        throw DomainError("phase variance must be non-negative");
    }
    if (regime == Regime::weak) {
        return alpha_sq * sigma_sq;
    }
    return -2.0 * alpha_sq * std::expm1(-0.5 * sigma_sq);
}

double dephasing_exponent_slope(double sigma_sq, double alpha_sq, Regime regime)
{
    if (regime == Regime::weak) {
        return alpha_sq;
    }
    return alpha_sq * std::exp(-0.5 * sigma_sq);
}

DephasingExponent dephasing(double sigma_sq, double alpha_sq, Regime regime)
{
    return {dephasing_exponent(sigma_sq, alpha_sq, regime), sigma_sq};
}

double gaussian_envelope(double sigma_sq, double alpha_sq, Regime regime)
{
    return std::exp(-dephasing_exponent(sigma_sq, alpha_sq, regime));
}

namespace {

CoherencePoint make_point(double sigma_sq, double dsigma_sq_dT, double alpha_sq, Regime regime)
{
    CoherencePoint p{};
    p.sigma_sq = sigma_sq;
    p.dsigma_sq_dT = dsigma_sq_dT;
    p.exponent = dephasing_exponent(sigma_sq, alpha_sq, regime);
    p.dexponent_dT = dephasing_exponent_slope(sigma_sq, alpha_sq, regime) * dsigma_sq_dT;
    p.coherence = std::exp(-p.exponent);
    p.dcoherence_dT = -p.coherence * p.dexponent_dT;
    return p;
}

} // namespace

CoherencePoint coherence_one_point(const CombConfig& cfg, Tooth tooth, double temperature,
                                   const AbsorberParams& absorber, Regime regime)
{
    cfg.validate();
    const auto th = thermal_state(absorber, temperature);
    const double lt = cfg.lambda * cfg.tooth_duration(tooth);
    return make_point(lt * lt * th.variance, lt * lt * th.dvariance_dT, cfg.alpha_sq, regime);
}

CoherencePoint coherence_two_point(const CombConfig& cfg, double temperature,
                                   const AbsorberParams& absorber, const KernelModel& kernel,
                                   Regime regime)
{
    cfg.validate();
    const auto th = thermal_state(absorber, temperature);
    const double k_tilde = normalized_kernel(kernel, cfg.delta, temperature);
    const double dk_tilde = kernel_dT(kernel, cfg.delta, temperature);
    const double k = th.variance * k_tilde;
    const double dk = th.dvariance_dT * k_tilde + th.variance * dk_tilde;

    const double sigma_sq = phase_variance_two(cfg, th.variance, k);
    const double l2 = cfg.lambda * cfg.lambda;
    const double dsigma_sq = l2 * ((cfg.tau1 * cfg.tau1 + cfg.tau2 * cfg.tau2) * th.dvariance_dT +
                                   2.0 * cfg.tau1 * cfg.tau2 * dk);
    return make_point(sigma_sq, dsigma_sq, cfg.alpha_sq, regime);
}

double coherence_two_from_variance(const CombConfig& cfg, double variance, double kernel_value,
                                   Regime regime)
{
    cfg.validate();
    return gaussian_envelope(phase_variance_two(cfg, variance, kernel_value), cfg.alpha_sq, regime);
}

double coherence_one(const CombConfig& cfg, Tooth tooth, double temperature,
                     const AbsorberParams& absorber, Regime regime)
{
    return coherence_one_point(cfg, tooth, temperature, absorber, regime).coherence;
}

double coherence_two(const CombConfig& cfg, double temperature, const AbsorberParams& absorber,
                     const KernelModel& kernel, Regime regime)
{
    return coherence_two_point(cfg, temperature, absorber, kernel, regime).coherence;
}

double probe_envelope(const ProbeDephasing& probe, double delta)
{
    probe.validate();
    if (!(delta >= 0.0)) {
        throw DomainError("delay must be non-negative");
    }
    return std::exp(-probe.gamma_p * delta);
}

double coherence_two_full(const CombConfig& cfg, double temperature,
                          const AbsorberParams& absorber, const KernelModel& kernel,
                          const ProbeDephasing& probe, Regime regime)
{
    const double cp = probe_envelope(probe, cfg.delta);
    return cp * cp * coherence_two(cfg, temperature, absorber, kernel, regime);
}

} // namespace combsense
