// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "nblab/bd_functions.hpp"
#include "nblab/errors.hpp"
#include "nblab/lab.hpp"
#include "oracles.hpp"

using namespace nblab;

namespace {

struct Outcome {
    bool ok = false;
    std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, a, b, c);
    return buf;
}

double summary_value(const Report& r, const std::string& key) {
    const Cell& c = r.summary.at(key);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
    return std::get<double>(c);
}

std::size_t col(const Report& r, const std::string& name) {
    for (std::size_t i = 0; i < r.columns.size(); ++i)
        if (r.columns[i] == name) return i;
    throw std::out_of_range(name);
}

std::string csv(const Report& r) {
    std::ostringstream out;
    write_csv(r, out);
    return out.str();
}

Outcome functional_equation() {
    const Report r = run(RunConfig::defaults(Command::zeta_selftest));
    const double worst = summary_value(r, "functional_equation_max_abs_diff");
    const double points = summary_value(r, "functional_equation_points");
    return {points == 200 && worst <= 1e-8, fmt("points=%.0f max_abs_diff=%.3g", points, worst)};
}

Outcome gamma_identity() {
    const Report r = run(RunConfig::defaults(Command::gamma_identity));
    const double worst = summary_value(r, "max_abs_diff");
    const double cells = summary_value(r, "cells");
    return {cells >= 500 && worst <= 1e-7 && r.tolerance_failures == 0 && r.hard_errors == 0,
            fmt("cells=%.0f max_abs_diff=%.3g", cells, worst)};
}

Outcome zeta_oracles() {
    double worst = 0.0;
    for (double s : {2.0, 3.0, 0.5, 0.75, 1.2, 1.5})
        for (const auto& p : oracle::kZetaReal)
            if (p.s.real() == s) worst = std::max(worst, std::abs(zeta_real(s) - p.value.real()));
    const double zero = std::abs(zeta({0.5, oracle::kFirstZeroHeight}));
    return {worst <= 1e-10 && zero < 1e-5, fmt("max_abs_diff=%.3g |zeta(1/2+14.134725i)|=%.3g", worst, zero)};
}

Outcome reciprocal_norm() {
    const QuadratureSpec spec{1e4, 40'000, 16};
    const IntegralResult r = critical_line_integral(
        [](double t) { return Complex(1.0 / (0.25 + t * t), 0.0); }, spec, {1.0, 2.0});
    const double diff = std::abs(r.value - 1.0);
    return {diff <= r.tail_bound + 1e-8, fmt("|value-1|=%.3g tail_bound=%.3g", diff, r.tail_bound)};
}

Outcome dual_formula() {
    const MobiusTable table = mobius_sieve(std::int64_t{1} << 22);
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> eps(0.05, 2.0), log_t(std::log(1e-3), std::log(1e3));
    double worst = 0.0;
    int bound_violations = 0;
    for (int i = 0; i < 100; ++i) {
        const BDParams p{eps(rng), std::exp(log_t(rng))};
        const double z = zeta_real(1.0 + p.eps);
        const double finite = f_eps_finite(p, table, z);
        worst = std::max(worst, std::abs(f_eps_series(p, table, 1e-10) - finite));
        if (std::abs(finite) > z / p.t) ++bound_violations;
    }
    return {worst < 1e-8 && bound_violations == 0,
            fmt("max_abs_diff=%.3g bound_violations=%.0f", worst, bound_violations)};
}

Outcome unit_interval_mellin() {
    RunConfig cfg = RunConfig::defaults(Command::mellin_check);
    cfg.eps = {0.3, 0.6, 1.0};
    cfg.s = {{2.0, 0.0}, {3.0, 0.0}, {2.0, 5.0}};
    const Report r = run(cfg);
    return {r.rows.size() == 9 && r.tolerance_failures == 0 && r.hard_errors == 0,
            fmt("rows=%.0f max_abs_diff=%.3g", static_cast<double>(r.rows.size()), summary_value(r, "max_abs_diff"))};
}

Outcome distances() {
    RunConfig cfg = RunConfig::defaults(Command::nb_distance);
    cfg.bign = {1, 2, 4, 8, 16, 32};
    const Report r = run(cfg);
    const std::size_t st = col(r, "status");
    int optimal = 0;
    for (const auto& row : r.rows)
        if (std::get<std::string>(row[col(r, "scheme")]) == "optimal") ++optimal;
    bool all_pass = r.hard_errors == 0 && r.tolerance_failures == 0 && optimal == 6;
    for (const auto& row : r.rows) all_pass = all_pass && std::get<std::string>(row[st]) == kStatusPass;
    const double cond = summary_value(r, "gram_condition");
    const double lambda = summary_value(r, "gram_min_eigenvalue");
    return {all_pass && lambda > 0.0, fmt("T=200 gram_condition=%.4g min_eigenvalue=%.3g", cond, lambda)};
}

Outcome balazard_saias() {
    const Report r = run(RunConfig::defaults(Command::bs_residual));
    const double factor = summary_value(r, "trend_factor.eps=0.25.t=0");
    return {factor >= 2.0 && r.tolerance_failures == 0 && r.hard_errors == 0,
            fmt("trend_factor=%.4g fitted_slope=%.3g (diagnostic)", factor, summary_value(r, "slope.eps=0.25.t=0"))};
}

Outcome causality() {
    RunConfig cfg = RunConfig::defaults(Command::causality_check);
    cfg.eps = {0.2};
    cfg.z = {{0.0, 0.0}, {-1.0, 0.0}, {-2.0, 0.0}};
    cfg.quad.T = 2000.0;
    const Report r = run(cfg);
    double budget = 0.0;
    for (const auto& row : r.rows) budget = std::max(budget, std::get<double>(row[col(r, "tail_budget")]));
    return {r.rows.size() == 3 && r.tolerance_failures == 0 && r.hard_errors == 0,
            fmt("max_abs_diff=%.3g max_tail_budget=%.3g", summary_value(r, "max_abs_diff"), budget)};
}

Outcome determinism() {
    std::vector<RunConfig> configs{RunConfig::defaults(Command::gamma_identity),
                                   RunConfig::defaults(Command::fep_eval),
                                   RunConfig::defaults(Command::zeta_selftest)};
    RunConfig nb = RunConfig::defaults(Command::nb_distance);
    nb.bign = {1, 4, 16, 100};
    configs.push_back(nb);
    int mismatches = 0;
    for (const RunConfig& cfg : configs) {
        oracle::use_threads(1);
        const std::string serial = csv(run(cfg, Execution::serial));
        const std::string again = csv(run(cfg, Execution::serial));
        const std::string one = csv(run(cfg, Execution::parallel));
        oracle::use_threads(4);
        const std::string four = csv(run(cfg, Execution::parallel));
        mismatches += (serial != again) + (serial != one) + (serial != four);
    }
    return {mismatches == 0, fmt("commands=%.0f mismatches=%.0f", static_cast<double>(configs.size()), mismatches)};
}

struct Criterion {
    int id;
    const char* name;
    double time_limit;  // seconds, 0 for none
    std::function<Outcome()> check;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "functional equation grid", 10.0, functional_equation},
        {2, "zeta ratio modulus identity", 60.0, gamma_identity},
        {3, "zeta oracle values", 0.0, zeta_oracles},
        {4, "reciprocal norm at T=1e4", 0.0, reciprocal_norm},
        {5, "f_eps dual formula", 0.0, dual_formula},
        {6, "unit-interval Mellin transform", 60.0, unit_interval_mellin},
        {7, "Nyman-Beurling distances", 0.0, distances},
        {8, "Balazard-Saias trend", 0.0, balazard_saias},
        {9, "causality check", 300.0, causality},
        {10, "determinism", 0.0, determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.check();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        bool ok = out.ok;
        if (c.time_limit > 0.0 && secs >= c.time_limit) {
            ok = false;
            out.detail += fmt(" over time limit %.0f s", c.time_limit);
        }
        std::printf("%s %2d %s: %s (%.2f s)\n", ok ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !ok;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
