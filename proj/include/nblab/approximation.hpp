#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nblab/arithmetic.hpp"
#include "nblab/kernels.hpp"
#include "nblab/quadrature.hpp"
#include "nblab/special_functions.hpp"

namespace nblab {

// Inner products on the critical line, <f, g> = (1/2pi) int f conj(g) dt,
// of e_n(s) = zeta(s) n^{-s} / s (n = 1..N) and the target 1/s, all on the
// fine rule of one QuadratureSpec.
struct GramSystem {
    int N = 0;
    std::vector<Complex> gram;  // N x N row-major, gram(n, m) = <e_m, e_n>
    std::vector<Complex> rhs;   // rhs(n) = <1/s, e_n>
    double target_norm_sq = 0;  // <1/s, 1/s> on the same rule
    QuadratureSpec quad_spec;
    double tail_budget = 0;     // mean-value estimate of the |t| > T contribution to gram(1, 1)
    double min_eigenvalue = 0;
    double max_eigenvalue = 0;
    double condition = 0;

    Complex entry(int n, int m) const { return gram[static_cast<std::size_t>((n - 1) * N + (m - 1))]; }

    /// The system for e_1..e_k; entries are bit-identical to this one's.
    GramSystem leading(int k) const;
};

inline constexpr int kMaxGramDimension = 64;
inline constexpr double kMaxGramCondition = 1e12;

/// Throws ConfigError for N outside [1, 64] or T < 100, ConditioningError when
/// the matrix is not positive definite or its condition exceeds 1e12.
GramSystem gram_system(int N, const QuadratureSpec& spec, const EvalConfig& cfg = {},
                       Execution exec = Execution::parallel);

enum class Scheme { optimal, natural };

std::string to_string(Scheme scheme);

struct DistanceReport {
    int N = 0;
    double d_squared = 0;
    std::vector<Complex> coefficients;
    Scheme scheme = Scheme::optimal;
    double eps = 0;            // natural scheme only
    double tail_budget = 0;
    double condition = 0;      // optimal scheme only
    bool clamped = false;      // d^2 came out negative within rounding and was set to 0
};

/// Least squares by Cholesky: gram c = rhs, d^2 = |1/s|^2 - Re(rhs^H c), with
/// |1/s|^2 taken on the same rule so that the value is the exact on-grid minimum.
DistanceReport optimal_distance(const GramSystem& g);

/// d^2 = |1/s - (zeta(s)/s) sum_{n <= N} mu(n) n^{-eps} n^{-s}|^2 by direct
/// quadrature of the residual. Throws RangeError if N > table.n_max().
DistanceReport natural_distance(int N, double eps, const MobiusTable& table, const QuadratureSpec& spec,
                                const EvalConfig& cfg = {}, Execution exec = Execution::parallel);

/// |sum_{n <= N} mu(n) n^{-s} - 1/zeta(s)| at s = 1/2 + eps + i t.
double bs_residual(double eps, double t, std::int64_t N, const MobiusTable& table, const EvalConfig& cfg = {});

/// 2 + gamma - log(4 pi).
double lower_bound_constant();

}  // namespace nblab
