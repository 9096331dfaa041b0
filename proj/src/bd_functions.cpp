#include "nblab/bd_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nblab/compensated.hpp"
#include "nblab/errors.hpp"

namespace nblab {
namespace {

// 1/(nt), written once so that both f_eps forms see identical bits.
inline double reciprocal(std::int64_t n, double t) { return 1.0 / (static_cast<double>(n) * t); }

std::int64_t bracket_terms(double t) { return static_cast<std::int64_t>(std::floor(1.0 / t)); }

void check_eps(double eps) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw DomainError("eps must be positive");
}

}  // namespace

void BDParams::validate() const {
    if (!(eps > 0.0 && eps <= kMaxEps))
        throw DomainError("BDParams: eps must lie in (0, 2], got " + show(eps));
    if (!(t >= kMinT && t <= kMaxT))
        throw DomainError("BDParams: t must lie in [1e-4, 1e4], got " + show(t));
}

FEpsEvaluator::FEpsEvaluator(double eps, const MobiusTable& table, const EvalConfig& cfg)
    : FEpsEvaluator(eps, table, (check_eps(eps), zeta_real(1.0 + eps, cfg))) {}

FEpsEvaluator::FEpsEvaluator(double eps, const MobiusTable& table, double zeta_1_plus_eps)
    : eps_(eps), zeta_1_plus_eps_(zeta_1_plus_eps) {
    check_eps(eps);
    const std::int64_t n_max = table.n_max();
    weights_.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
    for (std::int64_t n = 1; n <= n_max; ++n) {
        int mu = table[n];
        if (mu != 0) weights_[n] = mu * std::pow(static_cast<double>(n), -eps);
    }
}

double FEpsEvaluator::finite(double t) const {
    const std::int64_t count = bracket_terms(t);
    if (count > capacity())
        throw RangeError("f_eps_finite: need mu(n) up to " + std::to_string(count) + ", table holds " +
                         std::to_string(capacity()));
    CompensatedSum sum;
    // n = count + 1 can still have 1/(nt) >= 1 through rounding of floor(1/t).
    const std::int64_t last = std::min(count + 1, capacity());
    for (std::int64_t n = 1; n <= last; ++n) {
        const double w = weights_[n];
        if (w == 0.0) continue;
        const double x = reciprocal(n, t);
        if (x < 1.0) break;
        sum.add(w * std::floor(x));
    }
    return 1.0 / (zeta_1_plus_eps_ * t) - sum.value();
}

SeriesEvaluation f_eps_series_detail(const BDParams& p, const MobiusTable& table, double tol, const EvalConfig& cfg) {
    p.validate();
    if (!(tol > 0.0)) throw DomainError("f_eps_series: tol must be positive");
    const double eps = p.eps, t = p.t;
    const std::int64_t n_max = table.n_max();

    // Smallest M with M^{-eps} / (eps t) <= tol.
    const double needed = std::ceil(std::pow(eps * t * tol, -1.0 / eps));
    SeriesEvaluation out;
    const bool bounded = needed <= static_cast<double>(n_max);
    if (!bounded && n_max <= bracket_terms(t))
        throw CapacityError("f_eps_series: table of " + std::to_string(n_max) +
                            " entries can neither meet the tail bound nor pass 1/t");

    out.terms = bounded ? std::max<std::int64_t>(1, static_cast<std::int64_t>(needed)) : n_max;
    CompensatedSum sum;
    CompensatedSum dirichlet;  // sum mu(n) n^{-1-eps}, only for the closed tail
    for (std::int64_t n = 1; n <= out.terms; ++n) {
        const int mu = table[n];
        if (mu == 0) continue;
        const double w = mu * std::pow(static_cast<double>(n), -eps);
        const double x = reciprocal(n, t);
        sum.add(w * (x - std::floor(x)));
        if (!bounded) dirichlet.add(w / static_cast<double>(n));
    }
    if (bounded) {
        out.tail_bound = std::pow(static_cast<double>(out.terms), -eps) / (eps * t);
        out.value = sum.value();
    } else {
        out.tail_closed = true;
        const double inv_zeta = 1.0 / zeta_real(1.0 + eps, cfg);
        sum.add((inv_zeta - dirichlet.value()) / t);
        out.value = sum.value();
    }
    return out;
}

double f_eps_series(const BDParams& p, const MobiusTable& table, double tol, const EvalConfig& cfg) {
    return f_eps_series_detail(p, table, tol, cfg).value;
}

double f_eps_finite(const BDParams& p, const MobiusTable& table, double zeta_1_plus_eps) {
    p.validate();
    if (table.n_max() < bracket_terms(p.t))
        throw RangeError("f_eps_finite: table must reach floor(1/t) = " + std::to_string(bracket_terms(p.t)));
    // The evaluator would precompute the whole table; only floor(1/t) + 1 weights are needed here.
    CompensatedSum sum;
    const std::int64_t last = std::min(bracket_terms(p.t) + 1, table.n_max());
    for (std::int64_t n = 1; n <= last; ++n) {
        const int mu = table[n];
        if (mu == 0) continue;
        const double x = reciprocal(n, p.t);
        if (x < 1.0) break;
        sum.add(mu * std::pow(static_cast<double>(n), -p.eps) * std::floor(x));
    }
    return 1.0 / (zeta_1_plus_eps * p.t) - sum.value();
}

Complex f_eps_mellin_closed(double eps, Complex s, const EvalConfig& cfg) {
    check_eps(eps);
    return -zeta_ratio(s, eps, cfg) / s;
}

Complex f_eps_unit_interval_mellin_closed(double eps, Complex s, const EvalConfig& cfg) {
    check_eps(eps);
    if (!(s.real() > 1.0)) throw DomainError("unit-interval Mellin closed form needs Re(s) > 1");
    const double z1e = zeta_real(1.0 + eps, cfg);
    return 1.0 / (z1e * (s - 1.0)) - zeta_ratio(s, eps, cfg) / s;
}

namespace {

FiniteMellinOptions unit_interval_options(const UnitMellinQuadratureOptions& options) {
    FiniteMellinOptions fm;
    fm.points_per_panel = options.points_per_panel;
    fm.graded_levels = options.graded_levels;
    fm.grading_ratio = 0.5;
    fm.exec = options.exec;
    fm.breakpoints.reserve(static_cast<std::size_t>(std::max<std::int64_t>(0, options.breakpoint_count)));
    for (std::int64_t m = 2; m <= options.breakpoint_count; ++m) fm.breakpoints.push_back(1.0 / static_cast<double>(m));
    return fm;
}

void require_capacity(const FEpsEvaluator& f, int levels) {
    const double needed = std::ldexp(1.0, levels);
    if (static_cast<double>(f.capacity()) < needed)
        throw CapacityError("f_eps Mellin quadrature needs mu(n) up to 2^" + std::to_string(levels));
}

}  // namespace

std::vector<IntegralResult> f_eps_unit_interval_mellin_quadrature(double eps, std::span<const Complex> s_values,
                                                                  const MobiusTable& table,
                                                                  const UnitMellinQuadratureOptions& options,
                                                                  const EvalConfig& cfg) {
    for (Complex s : s_values)
        if (!(s.real() > 1.0)) throw DomainError("unit-interval Mellin quadrature needs Re(s) > 1");
    FEpsEvaluator f(eps, table, cfg);
    require_capacity(f, options.graded_levels);
    FiniteMellinOptions fm = unit_interval_options(options);
    fm.near_zero.deviation = {f.zeta_1_plus_eps(), 1.0};
    return finite_mellin([&f](double u) { return f.finite(u); }, 0.0, 1.0, s_values, fm);
}

IntegralResult f_eps_mellin_quadrature(double eps, Complex s, const MobiusTable& table,
                                       const UnitMellinQuadratureOptions& options, const EvalConfig& cfg) {
    if (!(s.real() > 0.0 && s.real() < 1.0)) throw DomainError("f_eps Mellin quadrature needs 0 < Re(s) < 1");
    FEpsEvaluator f(eps, table, cfg);
    require_capacity(f, options.graded_levels + 2);
    const double cutoff = std::ldexp(1.0, -options.graded_levels);
    double sup = 0.0;
    for (int k = 0; k <= 64; ++k) sup = std::max(sup, std::abs(f.finite(cutoff * (1.0 + 3.0 * k / 64.0))));

    FiniteMellinOptions fm = unit_interval_options(options);
    fm.near_zero.deviation = {sup, 0.0};
    IntegralResult r = finite_mellin([&f](double u) { return f.finite(u); }, 0.0, 1.0, s, fm);
    r.value += -1.0 / (f.zeta_1_plus_eps() * (s - 1.0));
    return r;
}

IntegralResult fractional_part_mellin(Complex s, std::int64_t cutoff, int points_per_panel) {
    const double sigma = s.real();
    if (!(sigma > 0.0 && sigma < 1.0)) throw DomainError("fractional_part_mellin needs 0 < Re(s) < 1");
    if (cutoff < 2) throw ConfigError("fractional_part_mellin: cutoff must be >= 2");
    if (points_per_panel < 4 || points_per_panel > 32 || points_per_panel % 2)
        throw ConfigError("fractional_part_mellin: points_per_panel must be even and lie in [4, 32]");

    const QuadratureRule& fine = gauss_legendre(points_per_panel);
    const QuadratureRule& coarse = gauss_legendre(points_per_panel / 2);
    auto panel = [&s](const QuadratureRule& rule, std::int64_t m) {
        CompensatedComplexSum sum;
        for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
            const double y = 0.5 * (rule.nodes[j] + 1.0);  // {x} on [m, m+1]
            const double x = static_cast<double>(m) + y;
            sum.add(0.5 * rule.weights[j] * y * std::exp(-(s + 1.0) * std::log(x)));
        }
        return sum.value();
    };
    CompensatedComplexSum fine_sum, coarse_sum;
    for (std::int64_t m = 1; m < cutoff; ++m) {
        fine_sum.add(panel(fine, m));
        coarse_sum.add(panel(coarse, m));
    }

    const auto M = static_cast<double>(cutoff);
    const Complex m_pow = std::exp(-s * std::log(M));
    // {x} = 1/2 + psi(x); psi integrates against x^{-s-1} to -M^{-s-1}/12 plus a bounded remainder.
    const Complex tail = m_pow / (2.0 * s) - m_pow / (12.0 * M);
    IntegralResult out;
    out.value = fine_sum.value() + tail + 1.0 / (1.0 - s);
    out.tail_bound = std::abs(s + 1.0) * std::pow(M, -sigma - 1.0) / (12.0 * (sigma + 1.0));
    out.panel_error_estimate = std::abs(fine_sum.value() - coarse_sum.value());
    return out;
}

DecayEnvelope shifted_ratio_envelope(double eps, double T) {
    check_eps(eps);
    if (!(T > eps)) throw EnvelopeError("shifted_ratio_envelope: T must exceed eps");
    const double stirling = 1.0 + 1.0 / T;
    return {stirling * std::pow(2.0 * kPi, -0.5 * eps) * T / (T - 0.5 * eps), 1.0 - 0.5 * eps};
}

Complex shifted_ratio_transform(double eps, Complex s, const EvalConfig& cfg) {
    const Complex shifted = s - 0.5 * eps;
    return -zeta_ratio(shifted, eps, cfg) / shifted;
}

namespace {

void check_g_eps(double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("g_eps requires eps in (0, 1)");
    if (eps > kMaxGEpsEps)
        throw EnvelopeError("g_eps: eps = " + show(eps) + " exceeds 0.5; the truncated tail is not controlled");
}

}  // namespace

std::vector<GEpsResult> g_eps(double eps, std::span<const double> ts, const QuadratureSpec& spec,
                              const MobiusTable& table, const EvalConfig& cfg, Execution exec) {
    check_g_eps(eps);
    for (double t : ts) BDParams{eps, t}.validate();
    FEpsEvaluator f(eps, table, cfg);
    const DecayEnvelope envelope = shifted_ratio_envelope(eps, spec.T);
    auto samples = CriticalLineSamples::sample_function(
        [eps, &cfg](Complex s) { return shifted_ratio_transform(eps, s, cfg); }, spec, exec);
    std::vector<GEpsResult> out;
    out.reserve(ts.size());
    for (double t : ts) {
        GEpsResult r;
        r.t = t;
        r.transform = inverse_mellin_critical(samples, t, envelope);
        r.value = r.transform.value;
        r.predicted = std::pow(t, -0.5 * eps) * f.finite(t);
        out.push_back(r);
    }
    return out;
}

double g_eps(double eps, double t, const QuadratureSpec& spec, const EvalConfig& cfg) {
    check_g_eps(eps);
    BDParams{eps, t}.validate();
    return inverse_mellin_critical([eps, &cfg](Complex s) { return shifted_ratio_transform(eps, s, cfg); }, t, spec,
                                   shifted_ratio_envelope(eps, spec.T))
        .value;
}

}  // namespace nblab
