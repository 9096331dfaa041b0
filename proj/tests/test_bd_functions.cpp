#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nblab/bd_functions.hpp"
#include "nblab/errors.hpp"
#include "oracles.hpp"

using namespace nblab;

namespace {

const MobiusTable& table() {
    static const MobiusTable t = mobius_sieve(std::int64_t{1} << 22);
    return t;
}

}  // namespace

TEST(BDParams, Window) {
    EXPECT_NO_THROW((BDParams{0.5, 1.0}.validate()));
    EXPECT_NO_THROW((BDParams{2.0, 1e-4}.validate()));
    EXPECT_THROW((BDParams{0.0, 1.0}.validate()), DomainError);
    EXPECT_THROW((BDParams{2.5, 1.0}.validate()), DomainError);
    EXPECT_THROW((BDParams{0.5, 5e-5}.validate()), DomainError);
    EXPECT_THROW((BDParams{0.5, 2e4}.validate()), DomainError);
}

TEST(FEps, ClosedValuesAboveOne) {
    // For t > 1 every bracket vanishes: f_eps(t) = 1/(zeta(1+eps) t).
    EXPECT_NEAR(f_eps_finite({1.0, 2.0}, table(), zeta_real(2.0)), oracle::kFEps1At2, 1e-15);
    EXPECT_NEAR(f_eps_series({1.0, 2.0}, table(), 1e-12), oracle::kFEps1At2, 1e-12);
    EXPECT_NEAR(f_eps_finite({0.5, 2.0}, table(), zeta_real(1.5)), oracle::kFEpsHalfAt2, 1e-15);
    // t = 1: only n = 1 contributes a bracket.
    EXPECT_NEAR(f_eps_finite({1.0, 1.0}, table(), zeta_real(2.0)), 6.0 / (kPi * kPi) - 1.0, 1e-14);
}

TEST(FEps, DualFormulaExample) {
    const BDParams p{0.3, 0.37};
    const double finite = f_eps_finite(p, table(), zeta_real(1.3));
    EXPECT_LT(std::abs(f_eps_series(p, table(), 1e-10) - finite), 1e-8);
}

TEST(FEps, DualFormulaAndBoundAtRandomPoints) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> eps(0.05, 2.0), log_t(std::log(1e-3), std::log(1e3));
    for (int i = 0; i < 100; ++i) {
        const BDParams p{eps(rng), std::exp(log_t(rng))};
        const double z = zeta_real(1.0 + p.eps);
        const double finite = f_eps_finite(p, table(), z);
        const SeriesEvaluation series = f_eps_series_detail(p, table(), 1e-10);
        EXPECT_LT(std::abs(series.value - finite), 1e-8) << p.eps << " " << p.t;
        EXPECT_LE(std::abs(finite), z / p.t) << p.eps << " " << p.t;
    }
}

TEST(FEps, SeriesRoutes) {
    // eps = 2, t = 1: the tail bound is met inside the table.
    const SeriesEvaluation bounded = f_eps_series_detail({2.0, 1.0}, table(), 1e-8);
    EXPECT_FALSE(bounded.tail_closed);
    EXPECT_GT(bounded.tail_bound, 0.0);
    EXPECT_LE(bounded.tail_bound, 1e-8);
    // Small eps needs far more terms than any table: the tail is closed exactly.
    const SeriesEvaluation closed = f_eps_series_detail({0.1, 0.01}, table(), 1e-10);
    EXPECT_TRUE(closed.tail_closed);
    EXPECT_EQ(closed.tail_bound, 0.0);
    EXPECT_EQ(closed.terms, table().n_max());
}

TEST(FEps, CapacityAndRangeErrors) {
    const MobiusTable small = mobius_sieve(50);
    EXPECT_THROW(f_eps_series({0.3, 0.01}, small, 1e-10), CapacityError);
    EXPECT_THROW(f_eps_finite({0.3, 0.01}, small, zeta_real(1.3)), RangeError);
    FEpsEvaluator f(0.3, small);
    EXPECT_EQ(f.capacity(), 50);
    EXPECT_THROW(f.finite(0.001), RangeError);
    EXPECT_NO_THROW(f.finite(0.05));
}

TEST(FEps, EvaluatorMatchesFreeFunction) {
    FEpsEvaluator f(0.7, table());
    for (double t : {1e-3, 0.0123, 0.37, 0.5, 3.0})
        EXPECT_EQ(f.finite(t), f_eps_finite({0.7, t}, table(), zeta_real(1.7))) << t;
}

TEST(Mellin, ClosedForms) {
    const Complex s(2.0, 0.0);
    EXPECT_NEAR(f_eps_unit_interval_mellin_closed(1.0, s).real(), oracle::kUnitMellinEps1At2, 1e-14);
    const Complex w(0.5, 10.0);
    EXPECT_LT(std::abs(f_eps_mellin_closed(0.4, w) + zeta(w) / (zeta(w + 0.4) * w)), 1e-14);
    EXPECT_THROW(f_eps_unit_interval_mellin_closed(0.4, 0.9), DomainError);
}

TEST(Mellin, UnitIntervalQuadratureMatchesClosedForm) {
    const std::vector<Complex> ss{{2.0, 0.0}, {3.0, 0.0}, {2.0, 5.0}};
    const auto q = f_eps_unit_interval_mellin_quadrature(1.0, ss, table());
    for (std::size_t i = 0; i < ss.size(); ++i) {
        const Complex closed = f_eps_unit_interval_mellin_closed(1.0, ss[i]);
        EXPECT_LT(std::abs(q[i].value - closed), 1e-5 + q[i].tail_bound) << ss[i];
        EXPECT_LT(std::abs(q[i].value - closed), 1e-8) << ss[i];
    }
    EXPECT_NEAR(q[0].value.real(), oracle::kUnitMellinEps1At2, 1e-8);
    EXPECT_THROW(f_eps_unit_interval_mellin_quadrature(1.0, std::vector<Complex>{0.5}, table()), DomainError);
}

TEST(Mellin, UnitIntervalQuadratureNeedsTable) {
    const MobiusTable small = mobius_sieve(1000);
    EXPECT_THROW(f_eps_unit_interval_mellin_quadrature(1.0, std::vector<Complex>{2.0}, small), CapacityError);
}

TEST(Mellin, SerialAndParallelBitIdentical) {
    oracle::use_threads(4);
    UnitMellinQuadratureOptions opts;
    opts.breakpoint_count = 200;
    opts.graded_levels = 12;
    const std::vector<Complex> ss{{2.0, 1.0}};
    opts.exec = Execution::serial;
    const auto a = f_eps_unit_interval_mellin_quadrature(0.6, ss, table(), opts);
    opts.exec = Execution::parallel;
    const auto b = f_eps_unit_interval_mellin_quadrature(0.6, ss, table(), opts);
    EXPECT_EQ(a[0].value, b[0].value);
    EXPECT_EQ(a[0].panel_error_estimate, b[0].panel_error_estimate);
}

TEST(Mellin, StripQuadratureAgreesRoughly) {
    // Below 2^{-20} only an empirical bound is available; agreement is checked
    // against that bound.
    const Complex s(0.5, 0.0);
    const IntegralResult r = f_eps_mellin_quadrature(0.6, s, table());
    EXPECT_LT(std::abs(r.value - f_eps_mellin_closed(0.6, s)), r.tail_bound + r.panel_error_estimate);
    EXPECT_THROW(f_eps_mellin_quadrature(0.6, 1.5, table()), DomainError);
}

TEST(FractionalPartMellin, MatchesZeta) {
    const IntegralResult r = fractional_part_mellin(0.5);
    EXPECT_LT(std::abs(r.value - oracle::kFractionalMellinHalf), 1e-5);
    EXPECT_LT(std::abs(r.value - oracle::kFractionalMellinHalf), r.tail_bound + 1e-12);
    for (Complex s : {Complex(0.3, 4.0), Complex(0.9, -20.0)}) {
        const IntegralResult q = fractional_part_mellin(s);
        EXPECT_LT(std::abs(q.value + zeta(s) / s), q.tail_bound + 1e-12) << s;
    }
    EXPECT_THROW(fractional_part_mellin(1.2), DomainError);
    EXPECT_THROW(fractional_part_mellin(0.5, 1), ConfigError);
}

TEST(ShiftedRatio, EnvelopeHoldsBeyondT) {
    for (double eps : {0.1, 0.2, 0.4}) {
        const double T = 200.0;
        const DecayEnvelope env = shifted_ratio_envelope(eps, T);
        EXPECT_NEAR(env.exponent, 1.0 - eps / 2.0, 1e-15);
        for (double t = T; t < 3.0 * T; t += 0.37) {
            const double bound = env.scale * std::pow(t, -env.exponent);
            EXPECT_LE(std::abs(shifted_ratio_transform(eps, Complex(0.5, t))), bound) << eps << " " << t;
        }
    }
    EXPECT_THROW(shifted_ratio_envelope(0.2, 0.1), EnvelopeError);
}

TEST(ShiftedRatio, ConjugateSymmetric) {
    const Complex s(0.5, 33.3);
    EXPECT_LT(std::abs(shifted_ratio_transform(0.2, std::conj(s)) - std::conj(shifted_ratio_transform(0.2, s))), 1e-13);
}

TEST(GEps, DomainAndEnvelopeErrors) {
    const QuadratureSpec spec{200.0, 1600, 16};
    EXPECT_THROW(g_eps(1.2, 2.0, spec), DomainError);
    EXPECT_THROW(g_eps(0.0, 2.0, spec), DomainError);
    EXPECT_THROW(g_eps(0.6, 2.0, spec), EnvelopeError);
    EXPECT_THROW(g_eps(0.2, 0.0, spec), DomainError);
}

// The truncated inverse transform is uncertified; its drift and the distance
// to the predicted value are both diagnostics, checked loosely.
TEST(GEps, TracksPredictedValue) {
    const QuadratureSpec spec{1000.0, 8000, 16};
    const std::vector<double> ts{2.0, 5.0};
    const auto r = g_eps(0.2, ts, spec, table());
    ASSERT_EQ(r.size(), 2u);
    EXPECT_NEAR(r[0].predicted, oracle::kGEps02At2, 1e-14);
    for (const auto& g : r) {
        EXPECT_FALSE(g.transform.tail_certified);
        EXPECT_LT(std::abs(g.value - g.predicted), 5e-3) << g.t;
        EXPECT_GT(g.transform.truncation_drift, 0.0);
    }
}
