#include "nblab/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "nblab/errors.hpp"

namespace nblab {
namespace {

constexpr Complex kI{0.0, 1.0};

// B_2k / (2k)!, k = 1..20.
constexpr std::array<double, EvalConfig::kMaxBernoulliOrder> kBernoulliOverFactorial = {
    8.3333333333333333333e-2,   -1.3888888888888888889e-3,  3.3068783068783068783e-5,
    -8.2671957671957671958e-7,  2.0876756987868098979e-8,   -5.2841901386874931848e-10,
    1.3382536530684678833e-11,  -3.3896802963225828668e-13, 8.5860620562778445641e-15,
    -2.174868698558061873e-16,  5.5090028283602295152e-18,  -1.3954464685812523341e-19,
    3.5347070396294674717e-21,  -8.9535174270375468504e-23, 2.2679524523376830603e-24,
    -5.7447906688722024453e-26, 1.4551724756148649019e-27,  -3.6859949406653101782e-29,
    9.336734257095044672e-31,   -2.3650224157006299346e-32,
};

// Lanczos coefficients for g = 607/128, 15 terms.
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,     57.156235665862923517,      -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,    .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4,  .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,   -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4,  .36899182659531622704e-5,
};
const double kHalfLog2Pi = 0.5 * std::log(2.0 * kPi);
const double kLogPi = std::log(kPi);

bool is_nonpositive_integer(Complex s) {
    if (s.imag() != 0.0 || s.real() > 0.0) return false;
    return std::abs(s.real() - std::nearbyint(s.real())) < 1e-14;
}

// log Gamma(z) for Re(z) >= 1/2.
Complex log_gamma_right(Complex z) {
    Complex x = z - 1.0;
    Complex series = kLanczos[0];
    for (std::size_t k = 1; k < kLanczos.size(); ++k) series += kLanczos[k] / (x + static_cast<double>(k));
    Complex tmp = x + kLanczosG + 0.5;
    return kHalfLog2Pi + (x + 0.5) * std::log(tmp) - tmp + std::log(series);
}

// log sin(pi z), stable for large |Im z| where sin itself overflows.
Complex log_sin_pi(Complex z) {
    double y = z.imag();
    if (std::abs(y) < 20.0) return std::log(std::sin(kPi * z));
    if (y > 0.0) return -kI * kPi * z + std::log((std::exp(2.0 * kI * kPi * z) - 1.0) / (2.0 * kI));
    return kI * kPi * z + std::log((1.0 - std::exp(-2.0 * kI * kPi * z)) / (2.0 * kI));
}

// Smallest prime factor for n < kSpfLimit, used to build n^{-s} multiplicatively:
// only primes need a complex exponential.
constexpr int kSpfLimit = 1 << 16;

const std::vector<std::int32_t>& spf_table() {
    static const std::vector<std::int32_t> table = [] {
        std::vector<std::int32_t> spf(kSpfLimit, 0);
        for (int i = 2; i < kSpfLimit; ++i) {
            if (spf[i] != 0) continue;
            for (int j = i; j < kSpfLimit; j += i)
                if (spf[j] == 0) spf[j] = i;
        }
        return spf;
    }();
    return table;
}

// sum_{n=1}^{count} n^{-s}, smallest terms first.
Complex direct_sum(Complex s, int count) {
    if (count < kSpfLimit) {
        const auto& spf = spf_table();
        thread_local std::vector<Complex> powers;
        powers.resize(static_cast<std::size_t>(count) + 1);
        if (count >= 1) powers[1] = 1.0;
        for (int n = 2; n <= count; ++n) {
            int p = spf[n];
            powers[n] = (p == n) ? std::exp(-s * std::log(static_cast<double>(n)))
                                 : powers[p] * powers[n / p];
        }
        Complex sum = 0.0;
        for (int n = count; n >= 1; --n) sum += powers[n];
        return sum;
    }
    Complex sum = 0.0;
    for (int n = count; n >= 1; --n) sum += std::exp(-s * std::log(static_cast<double>(n)));
    return sum;
}

}  // namespace

void EvalConfig::validate() const {
    if (euler_maclaurin_terms < 10)
        throw ConfigError("euler_maclaurin_terms must be >= 10, got " + std::to_string(euler_maclaurin_terms));
    if (bernoulli_order < 4 || bernoulli_order > kMaxBernoulliOrder)
        throw ConfigError("bernoulli_order must lie in [4, 20], got " + std::to_string(bernoulli_order));
    if (!(target_abs_error >= 1e-12))
        throw ConfigError("target_abs_error must be >= 1e-12");
}

Complex log_gamma(Complex s) {
    if (is_nonpositive_integer(s)) throw PoleError("Gamma has a pole at s = " + std::to_string(s.real()));
    if (s.real() >= 0.5) return log_gamma_right(s);
    return kLogPi - log_sin_pi(s) - log_gamma_right(1.0 - s);
}

Complex complex_gamma(Complex s) {
    Complex lg = log_gamma(s);
    if (lg.real() > 709.0) throw RangeError("Gamma(s) overflows double precision");
    return std::exp(lg);
}

ZetaEvaluation zeta_evaluate(Complex s, const EvalConfig& cfg) {
    cfg.validate();
    if (std::abs(s - 1.0) < kPoleGuardRadius) throw PoleError("zeta(s) evaluated within 1e-6 of the pole at s = 1");
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag())) throw DomainError("zeta(s) requires finite s");

    const int cutoff = std::max(cfg.euler_maclaurin_terms, static_cast<int>(std::ceil(2.0 * std::abs(s.imag()))));
    const double n = cutoff;
    const Complex n_pow = std::exp(-s * std::log(n));  // N^{-s}

    Complex tail = n * n_pow / (s - 1.0) + 0.5 * n_pow;
    // Corrections B_2k/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}.
    Complex rising = s;  // s(s+1)...(s+2k-2)
    Complex power = n_pow / n;
    const double inv_n2 = 1.0 / (n * n);
    Complex corrections = 0.0;
    for (int k = 1; k <= cfg.bernoulli_order; ++k) {
        corrections += kBernoulliOverFactorial[k - 1] * rising * power;
        rising *= (s + (2.0 * k - 1.0)) * (s + 2.0 * k);
        power *= inv_n2;
    }
    // First omitted term times |s + 2M + 1| / (sigma + 2M + 1) bounds the remainder.
    ZetaEvaluation out;
    const int m = cfg.bernoulli_order;
    double next = 0.0;
    if (m < EvalConfig::kMaxBernoulliOrder) {
        next = std::abs(kBernoulliOverFactorial[m] * rising * power);
    } else {
        // B_42/42! ~ 6e-34; use |B_2k/(2k)!| ~ 2/(2 pi)^{2k}.
        next = std::abs(2.0 / std::pow(2.0 * kPi, 2.0 * (m + 1)) * rising * power);
    }
    const double denom = s.real() + 2.0 * m + 1.0;
    out.remainder_bound = denom > 0.0 ? next * std::abs(s + (2.0 * m + 1.0)) / denom
                                      : std::numeric_limits<double>::infinity();
    if (out.remainder_bound > cfg.target_abs_error) {
        throw AccuracyError("Euler-Maclaurin remainder bound " + show(out.remainder_bound) +
                            " exceeds target " + show(cfg.target_abs_error));
    }
    out.value = direct_sum(s, cutoff - 1) + tail + corrections;
    out.direct_terms = cutoff;
    out.correction_terms = m;
    return out;
}

double zeta_real(double x, const EvalConfig& cfg) { return zeta_evaluate(Complex(x, 0.0), cfg).value.real(); }

Complex gamma_plus(Complex s) {
    Complex half = 0.5 * s;
    Complex mirrored = 0.5 * (1.0 - s);
    if (is_nonpositive_integer(half) || is_nonpositive_integer(mirrored))
        throw PoleError("gamma_plus: a Gamma factor has a pole");
    return std::exp((0.5 - s) * kLogPi + log_gamma(half) - log_gamma(mirrored));
}

Complex zeta_ratio(Complex s, double shift, const EvalConfig& cfg) {
    if (!(shift >= 0.0)) throw DomainError("zeta_ratio requires shift >= 0");
    if (std::abs(s - 1.0) < kPoleGuardRadius || std::abs(s + shift - 1.0) < kPoleGuardRadius)
        throw PoleError("zeta_ratio: argument within 1e-6 of the pole at s = 1");
    Complex den = zeta(s + shift, cfg);
    if (std::abs(den) < kDenominatorZeroThreshold)
        throw DenominatorNearZero("zeta_ratio: |zeta(s + A)| < 1e-12");
    if (shift == 0.0) return 1.0;
    return zeta(s, cfg) / den;
}

}  // namespace nblab
