#pragma once

// Quantum Fisher information of the one- and two-tooth protocols and the
// memory efficiency A = F2 / (F1(1) + F1(2)).
//
// Every QFI here is the pure-dephasing ("radial") form (dC/dT)^2/(1 - C^2)
// applied to the coherence model of the selected regime.  It is evaluated
// through E = -ln C as (dE/dT)^2 / expm1(2E) to avoid cancellation at C ~ 1.

#include "combsense/coherence.hpp"
#include "combsense/kernels.hpp"
#include "combsense/physics.hpp"

namespace combsense {

struct QfiBreakdown {
    double f1_tooth1 = 0.0;           // 1/K^2
    double f1_tooth2 = 0.0;
    double f2 = 0.0;
    double advantage = 0.0;           // F2 / (F1(1) + F1(2)), full QFIs
    double advantage_weak_limit = 0.0;  // same ratio at leading order in the dephasing exponent
    double advantage_approx = 0.0;    // (1 + Kt)(1 + S_K / S_n)^2
    double s_nbar = 0.0;              // 1/K
    double s_kernel = 0.0;            // 1/K
    double variance_gain = 0.0;       // 1 + Kt
    double responsivity_factor = 0.0; // (1 + S_K / S_n)^2
    double k_tilde = 0.0;
    double dk_tilde_dT = 0.0;
    double gamma_phi2 = 0.0;          // two-tooth dephasing exponent
};

struct DecomposedEfficiency {
    double advantage_approx;
    double variance_gain;
    double responsivity_factor;
    double s_nbar;
    double s_kernel;
};

// (dC/dT)^2 / (1 - C^2); requires 0 < C < 1.
double qfi_from_coherence(double coherence, double dcoherence_dT);

// (dE/dT)^2 / (exp(2E) - 1) for C = exp(-E). Zero when E and dE/dT both vanish.
double qfi_from_exponent(double exponent, double dexponent_dT);

// Leading order of qfi_from_exponent as E -> 0: (dE/dT)^2 / (2E).
double qfi_weak_limit(double exponent, double dexponent_dT);

double qfi_one(const CombConfig& cfg, Tooth tooth, double temperature,
               const AbsorberParams& absorber, Regime regime);

double qfi_two(const CombConfig& cfg, double temperature, const AbsorberParams& absorber,
               const KernelModel& kernel, Regime regime);

// Radial QFI of Cp(delta)^2 C2: the probe envelope only rescales the
// derivative and inflates the denominator, (Cp^4 C2'^2) / (1 - Cp^4 C2^2).
double qfi_two_full(const CombConfig& cfg, double temperature, const AbsorberParams& absorber,
                    const KernelModel& kernel, const ProbeDephasing& probe, Regime regime);

QfiBreakdown memory_efficiency(const CombConfig& cfg, double temperature,
                               const AbsorberParams& absorber, const KernelModel& kernel,
                               Regime regime);

DecomposedEfficiency decomposed_efficiency(double n_bar, double dn_bar_dT, double k_tilde,
                                           double dk_tilde_dT);

} // namespace combsense
