#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nblab/arithmetic.hpp"
#include "nblab/quadrature.hpp"
#include "nblab/special_functions.hpp"

namespace nblab {

// f_eps(t) = sum_n mu(n) n^{-eps} {1/(nt)}.
struct BDParams {
    double eps = 0.5;
    double t = 1.0;

    static constexpr double kMinT = 1e-4;
    static constexpr double kMaxT = 1e4;
    static constexpr double kMaxEps = 2.0;

    // Throws DomainError outside eps in (0, 2], t in [1e-4, 1e4].
    void validate() const;
};

// Evaluator for one eps. Caches mu(n) n^{-eps} and zeta(1 + eps) so that many
// t values cost only the bracket sums.
class FEpsEvaluator {
public:
    FEpsEvaluator(double eps, const MobiusTable& table, const EvalConfig& cfg = {});
    FEpsEvaluator(double eps, const MobiusTable& table, double zeta_1_plus_eps);

    /// Largest 1/t the table supports.
    std::int64_t capacity() const { return static_cast<std::int64_t>(weights_.size()) - 1; }

    double eps() const { return eps_; }
    double zeta_1_plus_eps() const { return zeta_1_plus_eps_; }

    /// 1/(zeta(1+eps) t) - sum_{n <= 1/t} mu(n) n^{-eps} [1/(nt)]. Throws
    /// RangeError if the table ends below floor(1/t). No window check on t.
    double finite(double t) const;

private:
    double eps_;
    double zeta_1_plus_eps_;
    std::vector<double> weights_;  // mu(n) n^{-eps}, index 0 unused
};

struct SeriesEvaluation {
    double value = 0.0;
    std::int64_t terms = 0;        // explicit terms summed
    bool tail_closed = false;      // tail n > terms added in closed form
    double tail_bound = 0.0;       // bound on |omitted tail| (0 when closed)
};

/// The defining series. Sums mu(n) n^{-eps} {1/(nt)} for n up to the count
/// where the bound sum_{n > M} n^{-1-eps} / t <= M^{-eps} / (eps t) drops below
/// tol. When that count exceeds the table but the table reaches past 1/t,
/// every omitted term has {1/(nt)} = 1/(nt) and the tail is closed exactly as
/// (1/t)(1/zeta(1+eps) - sum_{n <= M} mu(n) n^{-1-eps}) with M = n_max.
/// Throws CapacityError when neither route is available.
SeriesEvaluation f_eps_series_detail(const BDParams& p, const MobiusTable& table, double tol,
                                     const EvalConfig& cfg = {});

double f_eps_series(const BDParams& p, const MobiusTable& table, double tol, const EvalConfig& cfg = {});

/// The finite form; zeta_1_plus_eps supplied by the caller (compute once per
/// batch with zeta_real).
double f_eps_finite(const BDParams& p, const MobiusTable& table, double zeta_1_plus_eps);

/// -zeta(s) / (zeta(s + eps) s).
Complex f_eps_mellin_closed(double eps, Complex s, const EvalConfig& cfg = {});

/// 1/(zeta(1+eps)(s-1)) - zeta(s)/(zeta(s+eps) s), Re(s) > 1.
Complex f_eps_unit_interval_mellin_closed(double eps, Complex s, const EvalConfig& cfg = {});

struct UnitMellinQuadratureOptions {
    std::int64_t breakpoint_count = 10'000;  // split the mesh at u = 1/m, m <= this
    int graded_levels = 20;
    int points_per_panel = 16;
    Execution exec = Execution::parallel;
};

/// Quadrature of int_0^1 f_eps(u) u^{s-1} du for each s (Re(s) > 1), sharing
/// the f_eps samples. The piece below 2^{-levels} is bounded with
/// |f_eps(u)| <= zeta(1+eps)/u and reported as tail_bound.
std::vector<IntegralResult> f_eps_unit_interval_mellin_quadrature(double eps, std::span<const Complex> s_values,
                                                                  const MobiusTable& table,
                                                                  const UnitMellinQuadratureOptions& options = {},
                                                                  const EvalConfig& cfg = {});

/// Mellin transform of f_eps over (0, inf) at 0 < Re(s) < 1, split as
/// quadrature on (0, 1) plus the closed form -1/(zeta(1+eps)(s-1)) of the
/// t > 1 piece. Near u = 0 only an empirical bound is available: tail_bound is
/// max |f_eps| over [d, 4d] times d^sigma / sigma with d = 2^{-levels}.
IntegralResult f_eps_mellin_quadrature(double eps, Complex s, const MobiusTable& table,
                                       const UnitMellinQuadratureOptions& options = {}, const EvalConfig& cfg = {});

/// int_0^inf {1/t} t^{s-1} dt for 0 < Re(s) < 1, whose closed form is
/// -zeta(s)/s. After x = 1/t the piece t < 1 is int_1^inf {x} x^{-s-1} dx,
/// integrated exactly panel by panel on [m, m+1] for m < cutoff. Beyond the
/// cutoff the mean 1/2 and the first correction are added in closed form and
/// the rest is bounded by |s+1| cutoff^{-sigma-1} / (12 (sigma+1)).
IntegralResult fractional_part_mellin(Complex s, std::int64_t cutoff = 10'000, int points_per_panel = 16);

/// Envelope for |zeta(s - eps/2) / (zeta(s + eps/2) (s - eps/2))| on the
/// critical line beyond height T. The modulus of the zeta ratio equals
/// |gamma_plus(s + eps/2)| there, which Stirling bounds by
/// (1 + 1/T) (|t| / 2pi)^{eps/2}.
DecayEnvelope shifted_ratio_envelope(double eps, double T);

/// -zeta(s - eps/2) / (zeta(s + eps/2) (s - eps/2)).
Complex shifted_ratio_transform(double eps, Complex s, const EvalConfig& cfg = {});

inline constexpr double kMaxGEpsEps = 0.5;

struct GEpsResult {
    double t = 0.0;
    double value = 0.0;
    double predicted = 0.0;        // t^{-eps/2} f_eps(t)
    InverseMellinResult transform;
};

/// g_eps(t) as the inverse Mellin transform of shifted_ratio_transform from the
/// critical line, for every t, sharing one set of samples. Throws
/// EnvelopeError for eps > 1/2 and DomainError outside eps in (0, 1).
std::vector<GEpsResult> g_eps(double eps, std::span<const double> ts, const QuadratureSpec& spec,
                              const MobiusTable& table, const EvalConfig& cfg = {},
                              Execution exec = Execution::parallel);

double g_eps(double eps, double t, const QuadratureSpec& spec, const EvalConfig& cfg = {});

}  // namespace nblab
