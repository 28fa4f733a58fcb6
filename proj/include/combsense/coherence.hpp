#pragma once

// Probe phase variances and coherence envelopes for one- and two-tooth
// interrogation of a thermal absorber.
//
// Convention: the dephasing exponent E = -ln C is built from the accumulated
// phase variance sigma^2.  Weak regime: E = |alpha|^2 sigma^2.  Exact
// (Gaussian overlap) regime: E = 2|alpha|^2 (1 - exp(-sigma^2/2)).

#include "combsense/kernels.hpp"
#include "combsense/physics.hpp"

namespace combsense {

enum class Regime { exact, weak };

enum class Tooth { first, second };

struct CombConfig {
    double lambda = 0.5;    // cross-Kerr rate, rad/tau0
    double tau1 = 3.0;      // tau0
    double tau2 = 3.0;      // tau0
    double alpha_sq = 1.0;  // mean probe photon number
    double delta = 0.0;     // inter-tooth delay, tau0

    // Equal teeth of duration tooth_duration with (lambda tau)^2 = g.
    static CombConfig from_coupling(double g, double delta, double alpha_sq = 1.0,
                                    double tooth_duration = 1.0e-9);

    CombConfig with_delay(double new_delta) const;
    double tooth_duration(Tooth tooth) const noexcept { return tooth == Tooth::first ? tau1 : tau2; }
    void validate() const;
};

struct DimensionlessCoupling {
    double g = 0.05;
    void validate() const;
};

struct ProbeDephasing {
    double gamma_p = 0.0;  // 1/tau0
    void validate() const;
};

struct DephasingExponent {
    double gamma_phi = 0.0;
    double sigma_sq = 0.0;
};

// Mean occupation, variance and their temperature derivatives at T.
struct ThermalState {
    double n_bar;
    double dn_bar_dT;
    double variance;
    double dvariance_dT;
};

ThermalState thermal_state(const AbsorberParams& absorber, double temperature,
                           DerivativeMode derivative = DerivativeMode::exact);

// (lambda tau)^2 Var(n_a)
double phase_variance_one(double lambda, double tau, double variance);
double phase_variance_one(const CombConfig& cfg, Tooth tooth, double variance);

// lambda^2 [(tau1^2 + tau2^2) Var + 2 tau1 tau2 K]
double phase_variance_two(const CombConfig& cfg, double variance, double kernel_value);

double dephasing_exponent(double sigma_sq, double alpha_sq, Regime regime);
// dE / d sigma^2
double dephasing_exponent_slope(double sigma_sq, double alpha_sq, Regime regime);

DephasingExponent dephasing(double sigma_sq, double alpha_sq, Regime regime);

double gaussian_envelope(double sigma_sq, double alpha_sq, Regime regime);

// Coherence and its analytic temperature derivative at one operating point.
struct CoherencePoint {
    double sigma_sq;
    double dsigma_sq_dT;
    double exponent;      // E = -ln C
    double dexponent_dT;
    double coherence;
    double dcoherence_dT;
};

CoherencePoint coherence_one_point(const CombConfig& cfg, Tooth tooth, double temperature,
                                   const AbsorberParams& absorber, Regime regime);
CoherencePoint coherence_two_point(const CombConfig& cfg, double temperature,
                                   const AbsorberParams& absorber, const KernelModel& kernel,
                                   Regime regime);

// Envelope for a given occupation variance and kernel value; used where the
// variance is prescribed directly rather than derived from a temperature.
double coherence_two_from_variance(const CombConfig& cfg, double variance, double kernel_value,
                                   Regime regime);

double coherence_one(const CombConfig& cfg, Tooth tooth, double temperature,
                     const AbsorberParams& absorber, Regime regime);
double coherence_two(const CombConfig& cfg, double temperature, const AbsorberParams& absorber,
                     const KernelModel& kernel, Regime regime);

// exp(-gamma_p delta)
double probe_envelope(const ProbeDephasing& probe, double delta);

// probe_envelope(delta)^2 * coherence_two
double coherence_two_full(const CombConfig& cfg, double temperature,
                          const AbsorberParams& absorber, const KernelModel& kernel,
                          const ProbeDephasing& probe, Regime regime);

} // namespace combsense
