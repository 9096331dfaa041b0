#pragma once

#include <complex>

namespace nblab {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286061;

// Accuracy controls for the Euler-Maclaurin zeta engine.
struct EvalConfig {
    int euler_maclaurin_terms = 20;  // floor on the direct-sum cutoff
    int bernoulli_order = 8;         // number of B_2k correction terms
    double target_abs_error = 1e-12;

    static constexpr int kMaxBernoulliOrder = 20;

    // Throws ConfigError when a field is outside its documented range.
    void validate() const;
};

/// log Gamma(s) up to an additive multiple of 2*pi*i. Lanczos (g = 607/128)
/// in the right half-plane, reflection for Re(s) < 1/2. Throws PoleError at
/// nonpositive integers.
Complex log_gamma(Complex s);

/// Gamma(s). Relative error is a few ulp times |Im log Gamma(s)|; throws
/// RangeError when the result overflows a double.
Complex complex_gamma(Complex s);

struct ZetaEvaluation {
    Complex value;
    int direct_terms = 0;           // cutoff N of the direct sum
    int correction_terms = 0;       // Bernoulli terms applied
    double remainder_bound = 0.0;   // bound on the truncated Euler-Maclaurin tail
};

/// zeta(s) by Euler-Maclaurin summation. The direct-sum cutoff is
/// max(cfg.euler_maclaurin_terms, ceil(2|Im s|)).
///
/// Throws PoleError for |s - 1| < 1e-6 and AccuracyError when the remainder
/// bound exceeds cfg.target_abs_error.
ZetaEvaluation zeta_evaluate(Complex s, const EvalConfig& cfg = {});

inline Complex zeta(Complex s, const EvalConfig& cfg = {}) { return zeta_evaluate(s, cfg).value; }

double zeta_real(double x, const EvalConfig& cfg = {});

/// The functional-equation factor pi^{-s/2} Gamma(s/2) / (pi^{-(1-s)/2} Gamma((1-s)/2)),
/// so that zeta(1 - s) = gamma_plus(s) * zeta(s). Computed in log space so it
/// stays finite at large heights.
Complex gamma_plus(Complex s);

inline constexpr double kPoleGuardRadius = 1e-6;
inline constexpr double kDenominatorZeroThreshold = 1e-12;

/// zeta(s) / zeta(s + shift) for shift >= 0. Throws DenominatorNearZero when
/// |zeta(s + shift)| < 1e-12.
Complex zeta_ratio(Complex s, double shift, const EvalConfig& cfg = {});

}  // namespace nblab
