#pragma once

// Reference values and independent algorithms used only by the tests. The
// constants were computed once at 40 significant digits with an
// arbitrary-precision library and rounded to 20; they are frozen here.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "nblab/kernels.hpp"

namespace oracle {

using Complex = std::complex<double>;

struct Point {
    Complex s;
    Complex value;
};

inline const std::vector<Point> kZetaReal{
    {2.0, 1.6449340668482264365},   {3.0, 1.2020569031595942854},   {0.5, -1.4603545088095868129},
    {0.75, -3.4412853869452228944}, {1.2, 5.5915824411777507765},   {1.5, 2.6123753486854883433},
    {1.3, 3.931949211809544227},    {1.6, 2.2857656656801298766},
};

inline const std::vector<Point> kZetaComplex{
    {{0.5, 100.0}, {2.6926198856813240905, -0.020386029602598161771}},
    {{2.5, 100.0}, {1.1322143225832918015, -0.039876616810003985156}},
    {{0.3, 40.0}, {0.74877520950422584142, -1.4408854406344404847}},
    {{0.8, -250.0}, {0.5650876647259793464, -0.40899781427426850604}},
    {{1.5, 480.0}, {1.8513471508408576072, 0.57365268412206115126}},
    {{0.0, 3.0}, {0.43928267542694614055, -0.036471914772995705636}},
    {{3.0, -7.0}, {1.0142003689711159321, -0.096125395858022432498}},
    {{0.5, 1000.0}, {0.35633436719439605507, 0.93199783123299366512}},
};

inline const std::vector<Point> kGamma{
    {{0.25, 10.0}, {2.1195443619136061141e-7, 1.4397479617564029279e-8}},
    {{3.0, 100.0}, {1.5147875763283416619e-63, -1.7524961501869137716e-65}},
    {{-0.7, 3.0}, {-0.0013975726539856306399, -0.0057036262159899037708}},
    {{0.5, -300.0}, {-4.6850150494118664547e-205, 2.9358312192781918812e-205}},
};

inline constexpr double kFirstZeroHeight = 14.134725;
inline constexpr double kFirstZeroHeightExact = 14.134725141734693790;
inline constexpr double kZetaModulusNearFirstZero = 1.124183498394175333e-7;

inline const Complex kGammaPlus_0_3_7i{0.7208815234912138763, -0.66205103494138075774};
inline constexpr double kGammaPlusAbs_0_75_50i = 1.6795625280909436998;

inline constexpr double kLowerBoundConstant = 0.046191417932242067629;      // 2 + gamma - log(4 pi)
inline constexpr double kMobiusSum100Pow075 = -0.19298024698066826457;      // sum_{n <= 100} mu(n) n^{-3/4}
inline constexpr std::int64_t kMertens10000 = -23;

inline constexpr double kFEps1At2 = 0.30396355092701331433;    // 1/(2 zeta(2))
inline constexpr double kFEpsHalfAt2 = 0.19139669199971328112; // 1/(2 zeta(3/2))
inline constexpr double kUnitMellinEps1At2 = -0.076289286956076309205;
inline constexpr double kFractionalMellinHalf = 2.9207090176191736258;  // -zeta(1/2) / (1/2)
inline constexpr double kGEps02At2 = 0.083431926592526764188;
inline constexpr double kCausalityRhsEps02Z0 = -0.16258204518208408297;
inline constexpr double kCausalityRhsEps02Zm1 = -0.085162023666805948223;

// Balazard-Saias residuals at s = 3/4 for N = 10^2 .. 10^5, to 3 digits.
inline const std::vector<double> kBsResidual{0.0976, 0.0242, 0.0209, 0.00855};

// zeta via the Borwein acceleration of the alternating eta series; unrelated to
// the Euler-Maclaurin engine under test. Good to ~1e-13 for |Im s| <= 20.
inline Complex borwein_zeta(Complex s, int n = 60) {
    std::vector<long double> d(static_cast<std::size_t>(n) + 1);
    long double term = 1.0L / n, sum = term;
    d[0] = n * sum;
    for (int i = 1; i <= n; ++i) {
        term *= static_cast<long double>(n + i - 1) * 4.0L * (n - i + 1) / ((2.0L * i - 1.0L) * (2.0L * i));
        sum += term;
        d[i] = n * sum;
    }
    std::complex<long double> eta = 0.0L;
    const std::complex<long double> sl(s.real(), s.imag());
    for (int k = 0; k < n; ++k) {
        const long double sign = (k % 2 == 0) ? 1.0L : -1.0L;
        eta += sign * (d[k] - d[n]) * std::exp(-sl * std::log(static_cast<long double>(k + 1)));
    }
    eta /= -d[n];
    const std::complex<long double> denom = 1.0L - std::exp((1.0L - sl) * std::log(2.0L));
    const std::complex<long double> z = eta / denom;
    return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

inline int trial_division_mu(std::int64_t n) {
    int mu = 1;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        mu = -mu;
    }
    return n > 1 ? -mu : mu;
}

// Forces several OpenMP workers so serial/parallel comparisons exercise the
// threaded path even on a one-core machine.
inline void use_threads(int n) {
    ::setenv("NBLAB_THREADS", std::to_string(n).c_str(), 1);
    nblab::configure_threads_from_env();
}

}  // namespace oracle
