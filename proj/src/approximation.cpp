#include "nblab/approximation.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <iostream>
#include <string>

#include "nblab/compensated.hpp"
#include "nblab/errors.hpp"

namespace nblab {
namespace {

constexpr double kInv2Pi = 1.0 / (2.0 * kPi);

// (1/pi)(log(T/2pi) + 2 gamma + 1)/T approximates (1/2pi) int_{|t|>T} |zeta(1/2+it)|^2 / t^2 dt
// from the mean value int_0^X |zeta|^2 = X log(X/2pi) + (2 gamma - 1) X + O(sqrt X);
// doubled for the lower-order terms.
double mean_value_tail(double T) {
    return 2.0 * (std::log(T / (2.0 * kPi)) + 2.0 * kEulerGamma + 1.0) / (kPi * T);
}

using MatrixXc = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using VectorXc = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

MatrixXc to_matrix(const GramSystem& g) {
    MatrixXc m(g.N, g.N);
    for (int r = 0; r < g.N; ++r)
        for (int c = 0; c < g.N; ++c) m(r, c) = g.gram[static_cast<std::size_t>(r * g.N + c)];
    return m;
}

void analyse_conditioning(GramSystem& g) {
    Eigen::SelfAdjointEigenSolver<MatrixXc> eig(to_matrix(g), Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw ConditioningError("Gram eigen-decomposition failed");
    g.min_eigenvalue = eig.eigenvalues().minCoeff();
    g.max_eigenvalue = eig.eigenvalues().maxCoeff();
    if (!(g.min_eigenvalue > 0.0))
        throw ConditioningError("Gram matrix is not positive definite (smallest eigenvalue " +
                                show(g.min_eigenvalue) + ")");
    g.condition = g.max_eigenvalue / g.min_eigenvalue;
    if (g.condition > kMaxGramCondition)
        throw ConditioningError("Gram condition estimate " + show(g.condition) + " exceeds 1e12");
}

}  // namespace

GramSystem GramSystem::leading(int k) const {
    if (k < 1 || k > N) throw RangeError("GramSystem::leading: k outside [1, N]");
    GramSystem out;
    out.N = k;
    out.gram.resize(static_cast<std::size_t>(k) * k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c)
            out.gram[static_cast<std::size_t>(r * k + c)] = gram[static_cast<std::size_t>(r * N + c)];
    out.rhs.assign(rhs.begin(), rhs.begin() + k);
    out.target_norm_sq = target_norm_sq;
    out.quad_spec = quad_spec;
    out.tail_budget = tail_budget;
    analyse_conditioning(out);
    return out;
}

GramSystem gram_system(int N, const QuadratureSpec& spec, const EvalConfig& cfg, Execution exec) {
    if (N < 1 || N > kMaxGramDimension) throw ConfigError("gram_system: N must lie in [1, 64]");
    spec.validate();
    if (spec.T < 100.0) throw ConfigError("gram_system: T must be >= 100");

    const QuadratureRule rule = composite_gauss_legendre(-spec.T, spec.T, spec.panels, spec.points_per_panel);
    const std::size_t nodes = rule.nodes.size();
    const auto dim = static_cast<std::size_t>(N);

    // basis(j, n-1) = e_n(s_j); one zeta evaluation per node.
    std::vector<Complex> basis(nodes * dim);
    std::vector<Complex> target(nodes);
    for_each_index(
        nodes,
        [&](std::size_t j) {
            const Complex s(0.5, rule.nodes[j]);
            const Complex z = zeta(s, cfg) / s;
            target[j] = 1.0 / s;
            for (std::size_t n = 1; n <= dim; ++n)
                basis[j * dim + (n - 1)] = z * std::exp(-s * std::log(static_cast<double>(n)));
        },
        exec);

    GramSystem g;
    g.N = N;
    g.quad_spec = spec;
    g.gram = accumulate_gram(basis, rule.weights, dim, kInv2Pi, exec);
    g.rhs.resize(dim);
    for (std::size_t n = 0; n < dim; ++n) {
        CompensatedComplexSum sum;
        for (std::size_t j = 0; j < nodes; ++j) sum.add(rule.weights[j] * target[j] * std::conj(basis[j * dim + n]));
        g.rhs[n] = kInv2Pi * sum.value();
    }
    CompensatedSum norm;
    for (std::size_t j = 0; j < nodes; ++j) norm.add(rule.weights[j] * std::norm(target[j]));
    g.target_norm_sq = kInv2Pi * norm.value();
    g.tail_budget = mean_value_tail(spec.T);
    analyse_conditioning(g);
    return g;
}

std::string to_string(Scheme scheme) { return scheme == Scheme::optimal ? "optimal" : "natural"; }

DistanceReport optimal_distance(const GramSystem& g) {
    MatrixXc a = to_matrix(g);
    VectorXc b(g.N);
    for (int n = 0; n < g.N; ++n) b(n) = g.rhs[static_cast<std::size_t>(n)];
    Eigen::LLT<MatrixXc> llt(a);
    if (llt.info() != Eigen::Success) throw ConditioningError("Cholesky factorisation of the Gram matrix failed");
    VectorXc c = llt.solve(b);

    DistanceReport out;
    out.N = g.N;
    out.scheme = Scheme::optimal;
    out.tail_budget = g.tail_budget;
    out.condition = g.condition;
    out.coefficients.assign(c.data(), c.data() + c.size());
    const double d2 = g.target_norm_sq - b.dot(c).real();  // dot conjugates the left operand
    if (d2 < 0.0) {
        std::clog << "nblab: warning: optimal d^2 = " << d2 << " at N = " << g.N << " clamped to 0\n";
        out.clamped = true;
        out.d_squared = 0.0;
    } else {
        out.d_squared = d2;
    }
    return out;
}

DistanceReport natural_distance(int N, double eps, const MobiusTable& table, const QuadratureSpec& spec,
                                const EvalConfig& cfg, Execution exec) {
    if (N < 1) throw ConfigError("natural_distance: N must be >= 1");
    if (N > table.n_max()) throw RangeError("natural_distance: N exceeds the Mobius table");
    if (!(eps > 0.0)) throw DomainError("natural_distance: eps must be positive");
    spec.validate();

    const QuadratureRule rule = composite_gauss_legendre(-spec.T, spec.T, spec.panels, spec.points_per_panel);
    std::function<double(double)> residual = [&](double t) {
        const Complex s(0.5, t);
        const Complex r = 1.0 / s - zeta(s, cfg) / s * mu_partial_sum(table, s + eps, N);
        return std::norm(r);
    };
    const auto values = evaluate_nodes<double, double>(rule.nodes, residual, exec);
    CompensatedSum sum;
    for (std::size_t j = 0; j < values.size(); ++j) sum.add(rule.weights[j] * values[j]);

    DistanceReport out;
    out.N = N;
    out.scheme = Scheme::natural;
    out.eps = eps;
    out.d_squared = kInv2Pi * sum.value();
    out.coefficients.resize(static_cast<std::size_t>(N));
    double l1 = 0.0;  // bound on |P(1/2 + it)|
    for (int n = 1; n <= N; ++n) {
        const double c = table[n] * std::pow(static_cast<double>(n), -eps);
        out.coefficients[static_cast<std::size_t>(n - 1)] = c;
        l1 += std::abs(c) / std::sqrt(static_cast<double>(n));
    }
    // |1/s - zeta P / s|^2 <= 2/|s|^2 + 2 |P|^2 |zeta/s|^2 beyond T.
    out.tail_budget = 2.0 / (kPi * spec.T) + 2.0 * l1 * l1 * mean_value_tail(spec.T);
    return out;
}

double bs_residual(double eps, double t, std::int64_t N, const MobiusTable& table, const EvalConfig& cfg) {
    const Complex s(0.5 + eps, t);
    const Complex z = zeta(s, cfg);
    if (std::abs(z) < kDenominatorZeroThreshold) throw DenominatorNearZero("bs_residual: |zeta(s)| < 1e-12");
    return std::abs(mu_partial_sum(table, s, N) - 1.0 / z);
}

double lower_bound_constant() { return 2.0 + kEulerGamma - std::log(4.0 * kPi); }

}  // namespace nblab
