#pragma once

// Monte-Carlo oracle: draws absorber fluctuation pairs (dn(t1), dn(t2)) from the
// exact bivariate Gaussian law with covariance K(delta) and estimates the probe
// phase variance and two-tooth visibility by brute force.
//
// Randomness is counter based: every sample is a pure function of
// (seed, stream, index), so parallel and serial runs agree bit for bit.

#include <cstdint>
#include <string>
#include <vector>

#include "combsense/coherence.hpp"
#include "combsense/kernels.hpp"
#include "combsense/physics.hpp"

namespace combsense {

struct OracleConfig {
    std::uint64_t n_samples = 100000;
    std::uint64_t seed = 42;
    double regime_guard = 0.02;  // max two-tooth exponent for visibility comparisons

    void validate() const;
};

struct OracleEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n_samples = 0;
};

class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) noexcept;

    // Uniform in the open interval (0, 1).
    double uniform(std::uint64_t counter) const noexcept;
    // Two independent standard normals for sample `index` (Box-Muller).
    std::pair<double, double> normal_pair(std::uint64_t index) const noexcept;

    CounterRng split(std::uint64_t stream) const noexcept;
    std::uint64_t key() const noexcept { return key_; }

private:
    std::uint64_t key_;
};

std::uint64_t mix64(std::uint64_t x) noexcept;

struct FluctuationPair {
    double first;
    double second;
};

// Zero-mean pair with marginal variance `variance` and cross-covariance K(delta).
FluctuationPair sample_pair(const KernelModel& kernel, double temperature, double variance,
                            double delta, const CounterRng& rng, std::uint64_t index);

// Same law from a precomputed correlation coefficient rho = K / Var.
FluctuationPair sample_correlated(double sigma, double rho, const CounterRng& rng,
                                  std::uint64_t index);

// Var(lambda [tau1 dn1 + tau2 dn2]); unbiased sample variance with jackknife error.
OracleEstimate mc_phase_variance(const CombConfig& cfg, const KernelModel& kernel,
                                 double temperature, const AbsorberParams& absorber,
                                 const OracleConfig& oracle);

// Average of cos(sqrt(2) |alpha| phi), whose expectation for Gaussian phi is the
// weak-regime envelope exp(-|alpha|^2 sigma^2). Throws OutOfRegimeError above
// the guard.
OracleEstimate mc_coherence_two(const CombConfig& cfg, const KernelModel& kernel,
                                double temperature, const AbsorberParams& absorber,
                                const OracleConfig& oracle);

// Sample mean of dn1 * dn2 (expected K(delta)).
OracleEstimate mc_cross_covariance(const KernelModel& kernel, double temperature,
                                   double variance, double delta, const OracleConfig& oracle);

// ---- validation matrix --------------------------------------------------

struct ValidationPoint {
    std::string label;
    CombConfig cfg;
    KernelModel kernel;
    double temperature;  // kelvin
};

struct OracleComparison {
    std::string label;
    std::string quantity;  // "phase_variance" or "coherence_two"
    std::string kernel;
    double temperature = 0.0;
    double delta = 0.0;
    std::uint64_t seed = 0;  // seed of this comparison's sample stream
    double analytic = 0.0;
    OracleEstimate estimate;
    double z_score = 0.0;
    bool passed = false;
    bool skipped = false;
    std::string reason;
};

// 20 points spanning the Lorentzian, quasi-white and 1/f-like families.
std::vector<ValidationPoint> default_validation_matrix();

// Compares every point against the analytic forms (weak regime). The
// `analytic_shift_sigma` shifts each analytic target by that many standard
// errors, as a negative control.
std::vector<OracleComparison> run_validation(const std::vector<ValidationPoint>& points,
                                             const AbsorberParams& absorber,
                                             const OracleConfig& oracle,
                                             double tolerance_sigma = 3.0,
                                             double analytic_shift_sigma = 0.0);

} // namespace combsense
