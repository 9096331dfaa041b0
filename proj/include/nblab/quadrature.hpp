#pragma once

#include <functional>
#include <span>
#include <vector>

#include "nblab/kernels.hpp"
#include "nblab/special_functions.hpp"

namespace nblab {

// Composite Gauss-Legendre discretisation of t in [-T, T] on Re(s) = 1/2.
struct QuadratureSpec {
    double T = 200.0;
    int panels = 400;
    int points_per_panel = 16;

    void validate() const;
    std::size_t node_count() const { return static_cast<std::size_t>(panels) * points_per_panel; }
};

// |integrand(t)| <= scale / |t|^exponent for |t| >= T.
struct DecayEnvelope {
    double scale = 0.0;
    double exponent = 2.0;
};

struct IntegralResult {
    Complex value;
    double tail_bound = 0.0;
    double panel_error_estimate = 0.0;
};

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre on [-1, 1], n in [1, 64]. Cached, thread-safe.
const QuadratureRule& gauss_legendre(int n);

/// panels equal panels of an n-point Gauss-Legendre rule on [a, b].
QuadratureRule composite_gauss_legendre(double a, double b, int panels, int points);

/// (1/2pi) * 2 * scale * T^{1-p} / (p - 1); zero when scale == 0.
/// Throws EnvelopeError for p <= 1 with a nonzero scale.
double critical_line_tail_bound(const DecayEnvelope& env, double T);

using LineIntegrand = std::function<Complex(double t)>;
using LineFunction = std::function<Complex(Complex s)>;

// A function sampled once on the critical line at the nodes of the spec's rule
// (fine) and of the rule with half as many panels (coarse). Any number of
// kernels can then be integrated against the same samples.
class CriticalLineSamples {
public:
    static CriticalLineSamples sample(const LineIntegrand& f, const QuadratureSpec& spec,
                                      Execution exec = Execution::parallel);
    static CriticalLineSamples sample_function(const LineFunction& F, const QuadratureSpec& spec,
                                               Execution exec = Execution::parallel);

    const QuadratureSpec& spec() const { return spec_; }
    const QuadratureRule& fine_rule() const { return fine_; }
    std::span<const Complex> fine_values() const { return fine_values_; }

    /// (1/2pi) * sum_j w_j f(t_j) kernel(t_j) on both rules. The panel error
    /// estimate is |fine - coarse| plus a rounding floor. tail_bound is left at 0.
    IntegralResult integrate(const LineIntegrand& kernel = {}) const;

    /// Same integral truncated to the panels lying inside [-T/2, T/2].
    Complex integrate_half_height(const LineIntegrand& kernel = {}) const;

private:
    QuadratureSpec spec_;
    QuadratureRule fine_;
    QuadratureRule coarse_;
    std::vector<Complex> fine_values_;
    std::vector<Complex> coarse_values_;
};

/// (1/2pi) * int_{-T}^{T} integrand(t) dt with the truncated tail bounded by
/// the envelope.
IntegralResult critical_line_integral(const LineIntegrand& integrand, const QuadratureSpec& spec,
                                      const DecayEnvelope& envelope, Execution exec = Execution::parallel);

// scale * u^{-exponent}
struct PowerLaw {
    double scale = 0.0;
    double exponent = 0.0;
};

// Behaviour of f on (0, cutoff) when the lower limit is 0: `mean` is
// integrated analytically and |f - mean| <= `deviation` bounds the rest.
struct NearZeroBehavior {
    PowerLaw mean;
    PowerLaw deviation;
};

struct FiniteMellinOptions {
    int points_per_panel = 16;
    int graded_levels = 40;      // levels of the geometric mesh toward u = 0
    double grading_ratio = 0.5;
    std::vector<double> breakpoints;  // known discontinuities of f inside (a, b)
    NearZeroBehavior near_zero;
    Execution exec = Execution::parallel;
};

/// int_a^b f(u) u^{s-1} du for every s in `s_values`, sharing one set of
/// evaluations of f. The mesh is geometric toward a (ratio and level count from
/// the options) and is split at every breakpoint. When a == 0 the mesh stops at
/// b * ratio^levels and the remainder is handled by options.near_zero; its
/// bound goes to tail_bound.
std::vector<IntegralResult> finite_mellin(const std::function<double(double)>& f, double a, double b,
                                          std::span<const Complex> s_values,
                                          const FiniteMellinOptions& options = {});

IntegralResult finite_mellin(const std::function<double(double)>& f, double a, double b, Complex s,
                             const FiniteMellinOptions& options = {});

struct InverseMellinResult {
    double value = 0.0;
    double imag_residual = 0.0;       // |Im| before it was discarded
    double tail_bound = 0.0;          // infinite when the envelope cannot certify the tail
    bool tail_certified = true;
    double panel_error_estimate = 0.0;
    double truncation_drift = 0.0;    // |I(T) - I(T/2)|, a diagnostic for uncertified tails
};

inline constexpr double kSymmetryTolerance = 1e-6;

/// (1/2pi) int_{-T}^{T} F(1/2 + i tau) t^{-1/2 - i tau} dtau. Throws
/// SymmetryViolation when the imaginary part exceeds 1e-6. An envelope with
/// exponent <= 1 yields an uncertified (infinite) tail bound instead of an error.
InverseMellinResult inverse_mellin_critical(const CriticalLineSamples& samples, double t,
                                            const DecayEnvelope& envelope);

InverseMellinResult inverse_mellin_critical(const LineFunction& F, double t, const QuadratureSpec& spec,
                                            const DecayEnvelope& envelope, Execution exec = Execution::parallel);

inline constexpr double kHardyKernelMargin = 1e-3;

/// (1/2pi) int F(1/2 + it) / ((1/2 + it) - z) dt. The envelope describes F
/// alone; the kernel contributes one more power of decay. Throws DomainError
/// for Re(z) > 1/2 - 1e-3.
IntegralResult hardy_projection(const CriticalLineSamples& samples, Complex z, const DecayEnvelope& envelope);

IntegralResult hardy_projection(const LineFunction& F, Complex z, const QuadratureSpec& spec,
                                const DecayEnvelope& envelope, Execution exec = Execution::parallel);

}  // namespace nblab
