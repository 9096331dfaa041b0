#include "nblab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "nblab/compensated.hpp"
#include "nblab/errors.hpp"

namespace nblab {
namespace {

constexpr int kMaxRulePoints = 64;
constexpr double kRoundingFloorFactor = 64.0 * std::numeric_limits<double>::epsilon();

QuadratureRule build_gauss_legendre(int n) {
    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
            }
            dp = n * (z * p1 - p2) / (z * z - 1.0);
            double step = p1 / dp;
            z -= step;
            if (std::abs(step) < 1e-16) break;
        }
        // Recompute the derivative at the converged root for the weight.
        double p1 = 1.0, p2 = 0.0;
        for (int j = 0; j < n; ++j) {
            double p3 = p2;
            p2 = p1;
            p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
        }
        dp = n * (z * p1 - p2) / (z * z - 1.0);
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
    return rule;
}

// Appends the mapped rule on [a, b] to `out`.
void append_mapped(const QuadratureRule& ref, double a, double b, QuadratureRule& out) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (std::size_t k = 0; k < ref.nodes.size(); ++k) {
        out.nodes.push_back(mid + half * ref.nodes[k]);
        out.weights.push_back(half * ref.weights[k]);
    }
}

struct Reduction {
    Complex value;
    double magnitude = 0.0;  // sum |w f k|, for the rounding floor
};

Reduction reduce(const QuadratureRule& rule, std::span<const Complex> values, const LineIntegrand& kernel,
                 std::size_t begin, std::size_t end) {
    CompensatedComplexSum sum;
    double magnitude = 0.0;
    for (std::size_t j = begin; j < end; ++j) {
        Complex term = rule.weights[j] * values[j];
        if (kernel) term *= kernel(rule.nodes[j]);
        sum.add(term);
        magnitude += std::abs(term);
    }
    return {sum.value(), magnitude};
}

Complex checked_value(Complex v, double where) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw NodeSingularityError("integrand is not finite at t = " + show(where));
    return v;
}

}  // namespace

void QuadratureSpec::validate() const {
    if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError("quadrature: T must be positive");
    if (panels < 8) throw ConfigError("quadrature: panels must be >= 8");
    if (points_per_panel < 4 || points_per_panel > 32) throw ConfigError("quadrature: points_per_panel must lie in [4, 32]");
}

const QuadratureRule& gauss_legendre(int n) {
    static const std::array<QuadratureRule, kMaxRulePoints + 1> rules = [] {
        std::array<QuadratureRule, kMaxRulePoints + 1> r;
        for (int k = 1; k <= kMaxRulePoints; ++k) r[k] = build_gauss_legendre(k);
        return r;
    }();
    if (n < 1 || n > kMaxRulePoints) throw ConfigError("gauss_legendre: n must lie in [1, 64]");
    return rules[n];
}

QuadratureRule composite_gauss_legendre(double a, double b, int panels, int points) {
    const QuadratureRule& ref = gauss_legendre(points);
    QuadratureRule out;
    out.nodes.reserve(static_cast<std::size_t>(panels) * points);
    out.weights.reserve(static_cast<std::size_t>(panels) * points);
    const double h = (b - a) / panels;
    for (int k = 0; k < panels; ++k) {
        // Endpoints symmetric about the midpoint of [a, b] so that symmetric
        // intervals give exactly mirrored nodes.
        double lo = (k <= panels / 2) ? a + k * h : b - (panels - k) * h;
        double hi = (k + 1 <= panels / 2) ? a + (k + 1) * h : b - (panels - k - 1) * h;
        append_mapped(ref, lo, hi, out);
    }
    return out;
}

double critical_line_tail_bound(const DecayEnvelope& env, double T) {
    if (env.scale == 0.0) return 0.0;
    if (!(env.scale > 0.0)) throw EnvelopeError("decay envelope scale must be >= 0");
    if (!(env.exponent > 1.0))
        throw EnvelopeError("decay envelope exponent " + show(env.exponent) +
                            " does not certify an integrable tail");
    return 2.0 * env.scale * std::pow(T, 1.0 - env.exponent) / (env.exponent - 1.0) / (2.0 * kPi);
}

CriticalLineSamples CriticalLineSamples::sample(const LineIntegrand& f, const QuadratureSpec& spec, Execution exec) {
    spec.validate();
    CriticalLineSamples out;
    out.spec_ = spec;
    out.fine_ = composite_gauss_legendre(-spec.T, spec.T, spec.panels, spec.points_per_panel);
    out.coarse_ = composite_gauss_legendre(-spec.T, spec.T, (spec.panels + 1) / 2, spec.points_per_panel);

    std::vector<double> all(out.fine_.nodes);
    all.insert(all.end(), out.coarse_.nodes.begin(), out.coarse_.nodes.end());
    std::function<Complex(double)> guarded = [&f](double t) {
        Complex v;
        try {
            v = f(t);
        } catch (const NodeSingularityError&) {
            throw;
        } catch (const std::exception& e) {
            throw NodeSingularityError("integrand failed at t = " + show(t) + ": " + e.what());
        }
        return checked_value(v, t);
    };
    auto values = evaluate_nodes<Complex, double>(all, guarded, exec);
    const auto fine_count = static_cast<std::ptrdiff_t>(out.fine_.nodes.size());
    out.fine_values_.assign(values.begin(), values.begin() + fine_count);
    out.coarse_values_.assign(values.begin() + fine_count, values.end());
    return out;
}

CriticalLineSamples CriticalLineSamples::sample_function(const LineFunction& F, const QuadratureSpec& spec,
                                                         Execution exec) {
    return sample([&F](double t) { return F(Complex(0.5, t)); }, spec, exec);
}

IntegralResult CriticalLineSamples::integrate(const LineIntegrand& kernel) const {
    constexpr double inv_2pi = 1.0 / (2.0 * kPi);
    Reduction fine = reduce(fine_, fine_values_, kernel, 0, fine_values_.size());
    Reduction coarse = reduce(coarse_, coarse_values_, kernel, 0, coarse_values_.size());
    IntegralResult out;
    out.value = inv_2pi * fine.value;
    out.panel_error_estimate =
        inv_2pi * (std::abs(fine.value - coarse.value) + kRoundingFloorFactor * fine.magnitude);
    return out;
}

Complex CriticalLineSamples::integrate_half_height(const LineIntegrand& kernel) const {
    const double h = 2.0 * spec_.T / spec_.panels;
    const auto per = static_cast<std::size_t>(spec_.points_per_panel);
    // Panels k with [-T + k h, -T + (k+1) h] inside [-T/2, T/2].
    const auto first = static_cast<std::size_t>(std::ceil(0.5 * spec_.T / h - 1e-9));
    const auto last = static_cast<std::size_t>(std::floor(1.5 * spec_.T / h + 1e-9));
    if (last <= first) return 0.0;
    Reduction r = reduce(fine_, fine_values_, kernel, first * per, last * per);
    return r.value / (2.0 * kPi);
}

IntegralResult critical_line_integral(const LineIntegrand& integrand, const QuadratureSpec& spec,
                                      const DecayEnvelope& envelope, Execution exec) {
    double tail = critical_line_tail_bound(envelope, spec.T);
    IntegralResult out = CriticalLineSamples::sample(integrand, spec, exec).integrate();
    out.tail_bound = tail;
    return out;
}

std::vector<IntegralResult> finite_mellin(const std::function<double(double)>& f, double a, double b,
                                          std::span<const Complex> s_values, const FiniteMellinOptions& options) {
    if (!(a >= 0.0) || !(b > a) || !std::isfinite(b)) throw DomainError("finite_mellin requires 0 <= a < b < inf");
    if (options.points_per_panel < 2 || options.points_per_panel > kMaxRulePoints)
        throw ConfigError("finite_mellin: points_per_panel must lie in [2, 64]");
    if (!(options.grading_ratio > 0.0 && options.grading_ratio < 1.0))
        throw ConfigError("finite_mellin: grading_ratio must lie in (0, 1)");
    if (options.graded_levels < 1) throw ConfigError("finite_mellin: graded_levels must be >= 1");

    const double lower = (a == 0.0) ? b * std::pow(options.grading_ratio, options.graded_levels) : a;

    std::vector<double> mesh{lower, b};
    for (double x = b * options.grading_ratio; x > lower * (1.0 + 1e-12); x *= options.grading_ratio)
        mesh.push_back(x);
    for (double x : options.breakpoints)
        if (x > lower && x < b) mesh.push_back(x);
    std::sort(mesh.begin(), mesh.end());
    std::vector<double> cleaned;
    cleaned.reserve(mesh.size());
    for (double x : mesh)
        if (cleaned.empty() || x - cleaned.back() > 1e-14 * x) cleaned.push_back(x);

    QuadratureRule fine, coarse;
    const QuadratureRule& fine_ref = gauss_legendre(options.points_per_panel);
    const QuadratureRule& coarse_ref = gauss_legendre(std::max(1, options.points_per_panel / 2));
    for (std::size_t k = 0; k + 1 < cleaned.size(); ++k) {
        append_mapped(fine_ref, cleaned[k], cleaned[k + 1], fine);
        append_mapped(coarse_ref, cleaned[k], cleaned[k + 1], coarse);
    }

    std::vector<double> all(fine.nodes);
    all.insert(all.end(), coarse.nodes.begin(), coarse.nodes.end());
    std::function<double(double)> guarded = [&f](double u) {
        double v;
        try {
            v = f(u);
        } catch (const std::exception& e) {
            throw NodeSingularityError("finite_mellin: f failed at u = " + show(u) + ": " + e.what());
        }
        if (!std::isfinite(v)) throw NodeSingularityError("finite_mellin: f not finite at u = " + show(u));
        return v;
    };
    const auto values = evaluate_nodes<double, double>(all, guarded, options.exec);
    const std::size_t nf = fine.nodes.size();

    std::vector<double> log_nodes(all.size());
    for (std::size_t j = 0; j < all.size(); ++j) log_nodes[j] = std::log(all[j]);

    std::vector<IntegralResult> results;
    results.reserve(s_values.size());
    for (Complex s : s_values) {
        CompensatedComplexSum fine_sum, coarse_sum;
        double magnitude = 0.0;
        for (std::size_t j = 0; j < all.size(); ++j) {
            const double w = j < nf ? fine.weights[j] : coarse.weights[j - nf];
            Complex term = w * values[j] * std::exp((s - 1.0) * log_nodes[j]);
            if (j < nf) {
                fine_sum.add(term);
                magnitude += std::abs(term);
            } else {
                coarse_sum.add(term);
            }
        }
        IntegralResult r;
        r.value = fine_sum.value();
        r.panel_error_estimate = std::abs(fine_sum.value() - coarse_sum.value()) + kRoundingFloorFactor * magnitude;
        if (a == 0.0) {
            const PowerLaw& mean = options.near_zero.mean;
            const PowerLaw& dev = options.near_zero.deviation;
            if (mean.scale != 0.0) {
                Complex e = s - mean.exponent;
                if (std::abs(e) == 0.0) throw DomainError("finite_mellin: near-zero mean model is not integrable");
                r.value += mean.scale * std::exp(e * std::log(lower)) / e;
            }
            if (dev.scale != 0.0) {
                double e = s.real() - dev.exponent;
                if (!(e > 0.0))
                    throw DomainError("finite_mellin: Re(s) must exceed the near-zero deviation exponent");
                r.tail_bound = std::abs(dev.scale) * std::pow(lower, e) / e;
            }
        }
        results.push_back(r);
    }
    return results;
}

IntegralResult finite_mellin(const std::function<double(double)>& f, double a, double b, Complex s,
                             const FiniteMellinOptions& options) {
    std::array<Complex, 1> one{s};
    return finite_mellin(f, a, b, one, options).front();
}

InverseMellinResult inverse_mellin_critical(const CriticalLineSamples& samples, double t,
                                            const DecayEnvelope& envelope) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("inverse_mellin_critical requires t > 0");
    const double log_t = std::log(t);
    const double amplitude = 1.0 / std::sqrt(t);
    LineIntegrand kernel = [=](double tau) { return amplitude * std::exp(Complex(0.0, -tau * log_t)); };

    IntegralResult full = samples.integrate(kernel);
    Complex half = samples.integrate_half_height(kernel);

    InverseMellinResult out;
    out.value = full.value.real();
    out.imag_residual = std::abs(full.value.imag());
    if (out.imag_residual > kSymmetryTolerance)
        throw SymmetryViolation("inverse Mellin transform has imaginary part " + show(out.imag_residual));
    out.panel_error_estimate = full.panel_error_estimate;
    out.truncation_drift = std::abs(full.value - half);
    if (envelope.scale == 0.0) {
        out.tail_bound = 0.0;
    } else if (envelope.exponent > 1.0) {
        out.tail_bound = amplitude * critical_line_tail_bound(envelope, samples.spec().T);
    } else {
        out.tail_bound = std::numeric_limits<double>::infinity();
        out.tail_certified = false;
    }
    return out;
}

InverseMellinResult inverse_mellin_critical(const LineFunction& F, double t, const QuadratureSpec& spec,
                                            const DecayEnvelope& envelope, Execution exec) {
    return inverse_mellin_critical(CriticalLineSamples::sample_function(F, spec, exec), t, envelope);
}

IntegralResult hardy_projection(const CriticalLineSamples& samples, Complex z, const DecayEnvelope& envelope) {
    if (z.real() > 0.5 - kHardyKernelMargin)
        throw DomainError("hardy_projection requires Re(z) <= 1/2 - 1e-3, got Re(z) = " + show(z.real()));
    const double T = samples.spec().T;
    DecayEnvelope combined{0.0, envelope.exponent + 1.0};
    if (envelope.scale != 0.0) {
        if (T <= std::abs(z.imag())) throw EnvelopeError("hardy_projection: |Im z| must be below T");
        combined.scale = envelope.scale * T / (T - std::abs(z.imag()));
    }
    const double tail = critical_line_tail_bound(combined, T);
    IntegralResult out = samples.integrate([z](double t) { return 1.0 / (Complex(0.5, t) - z); });
    out.tail_bound = tail;
    return out;
}

IntegralResult hardy_projection(const LineFunction& F, Complex z, const QuadratureSpec& spec,
                                const DecayEnvelope& envelope, Execution exec) {
    if (z.real() > 0.5 - kHardyKernelMargin)
        throw DomainError("hardy_projection requires Re(z) <= 1/2 - 1e-3, got Re(z) = " + show(z.real()));
    return hardy_projection(CriticalLineSamples::sample_function(F, spec, exec), z, envelope);
}

}  // namespace nblab
