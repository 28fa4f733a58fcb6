#include "combsense/metrology.hpp"

#include <cmath>

#include "combsense/errors.hpp"

namespace combsense {

double qfi_from_coherence(double coherence, double dcoherence_dT)
{
    if (!(coherence > 0.0)) {
        throw DomainError("coherence must be positive");
    }
    if (coherence >= 1.0) {
        throw SingularVisibilityError("QFI is singular at unit visibility");
    }
    return dcoherence_dT * dcoherence_dT / (1.0 - coherence * coherence);
}

double qfi_from_exponent(double exponent, double dexponent_dT)
{
    if (!(exponent >= 0.0)) {
        throw DomainError("dephasing exponent must be non-negative");
    }
    if (exponent == 0.0) {
        if (dexponent_dT == 0.0) {
            return 0.0;
        }
        throw SingularVisibilityError("QFI is singular at unit visibility");
    }
    return dexponent_dT * dexponent_dT / std::expm1(2.0 * exponent);
}

double qfi_weak_limit(double exponent, double dexponent_dT)
{
    if (!(exponent >= 0.0)) {
        throw DomainError("dephasing exponent must be non-negative");
    }
    if (exponent == 0.0) {
        if (dexponent_dT == 0.0) {
            return 0.0;
        }
        throw SingularVisibilityError("QFI is singular at unit visibility");
    }
    return dexponent_dT * dexponent_dT / (2.0 * exponent);
}

double qfi_one(const CombConfig& cfg, Tooth tooth, double temperature,
               const AbsorberParams& absorber, Regime regime)
{
    const auto p = coherence_one_point(cfg, tooth, temperature, absorber, regime);
    return qfi_from_exponent(p.exponent, p.dexponent_dT);
}

double qfi_two(const CombConfig& cfg, double temperature, const AbsorberParams& absorber,
               const KernelModel& kernel, Regime regime)
{
    const auto p = coherence_two_point(cfg, temperature, absorber, kernel, regime);
    return qfi_from_exponent(p.exponent, p.dexponent_dT);
}

double qfi_two_full(const CombConfig& cfg, double temperature, const AbsorberParams& absorber,
                    const KernelModel& kernel, const ProbeDephasing& probe, Regime regime)
{
    const auto p = coherence_two_point(cfg, temperature, absorber, kernel, regime);
    probe.validate();
    // Full exponent E + 2 gamma_p delta; the temperature slope is unchanged.
    return qfi_from_exponent(p.exponent + 2.0 * probe.gamma_p * cfg.delta, p.dexponent_dT);
}

DecomposedEfficiency decomposed_efficiency(double n_bar, double dn_bar_dT, double k_tilde,
                                           double dk_tilde_dT)
{
    if (!(n_bar > 0.0)) {
        throw DomainError("decomposition needs a positive occupation");
    }
    if (!(dn_bar_dT > 0.0)) {
        throw DomainError("decomposition needs a positive occupation slope");
    }
    const double s_nbar = dn_bar_dT / n_bar;
    const double gain = 1.0 + k_tilde;
    const double s_kernel = dk_tilde_dT / gain;
    const double bracket = 1.0 + s_kernel / s_nbar;
    const double factor = bracket * bracket;
    return {gain * factor, gain, factor, s_nbar, s_kernel};
}

QfiBreakdown memory_efficiency(const CombConfig& cfg, double temperature,
                               const AbsorberParams& absorber, const KernelModel& kernel,
                               Regime regime)
{
    const auto one1 = coherence_one_point(cfg, Tooth::first, temperature, absorber, regime);
    const auto one2 = coherence_one_point(cfg, Tooth::second, temperature, absorber, regime);
    const auto two = coherence_two_point(cfg, temperature, absorber, kernel, regime);

    QfiBreakdown out;
    out.f1_tooth1 = qfi_from_exponent(one1.exponent, one1.dexponent_dT);
    out.f1_tooth2 = qfi_from_exponent(one2.exponent, one2.dexponent_dT);
    out.f2 = qfi_from_exponent(two.exponent, two.dexponent_dT);
    out.gamma_phi2 = two.exponent;

    const double denom = out.f1_tooth1 + out.f1_tooth2;
    if (!(denom > 0.0)) {
        throw DegenerateProtocolError("one-tooth QFIs vanish; memory efficiency undefined");
    }
    out.advantage = out.f2 / denom;

    // The weak-dephasing limit is regime independent: both envelopes share
    // E = |alpha|^2 sigma^2 at leading order.
    const double a2 = cfg.alpha_sq;
    const double lim1 = qfi_weak_limit(a2 * one1.sigma_sq, a2 * one1.dsigma_sq_dT);
    const double lim2 = qfi_weak_limit(a2 * one2.sigma_sq, a2 * one2.dsigma_sq_dT);
    const double lim_two = qfi_weak_limit(a2 * two.sigma_sq, a2 * two.dsigma_sq_dT);
    out.advantage_weak_limit = lim_two / (lim1 + lim2);

    const auto th = thermal_state(absorber, temperature);
    out.k_tilde = normalized_kernel(kernel, cfg.delta, temperature);
    out.dk_tilde_dT = kernel_dT(kernel, cfg.delta, temperature);
    const auto dec = decomposed_efficiency(th.n_bar, th.dn_bar_dT, out.k_tilde, out.dk_tilde_dT);
    out.advantage_approx = dec.advantage_approx;
    out.variance_gain = dec.variance_gain;
    out.responsivity_factor = dec.responsivity_factor;
    out.s_nbar = dec.s_nbar;
    out.s_kernel = dec.s_kernel;
    return out;
}

} // namespace combsense
