#include "nblab/lab.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <optional>
#include <utility>

#include "nblab/approximation.hpp"
#include "nblab/arithmetic.hpp"
#include "nblab/bd_functions.hpp"
#include "nblab/errors.hpp"

namespace nblab {
namespace {

using Row = std::vector<Cell>;
using nlohmann::json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

constexpr std::array<std::pair<Command, const char*>, 10> kCommandNames{{
    {Command::ratio_sweep, "ratio-sweep"},
    {Command::gamma_identity, "gamma-identity"},
    {Command::growth_check, "growth-check"},
    {Command::fep_eval, "fep-eval"},
    {Command::mellin_check, "mellin-check"},
    {Command::geps_compare, "geps-compare"},
    {Command::nb_distance, "nb-distance"},
    {Command::bs_residual, "bs-residual"},
    {Command::causality_check, "causality-check"},
    {Command::zeta_selftest, "zeta-selftest"},
}};

// Identities asserted by the commands.
constexpr double kGammaIdentityTolerance = 1e-7;
constexpr double kFepTolerance = 1e-8;
constexpr double kFepSeriesTol = 1e-10;
constexpr double kMellinTolerance = 1e-5;
constexpr double kCausalitySlack = 1e-4;
constexpr double kCausalityMaxRealZ = 0.4;
constexpr double kZetaOracleTolerance = 1e-10;
constexpr double kZeroModulusTolerance = 1e-5;
constexpr double kFunctionalEquationTolerance = 1e-8;
constexpr double kBsTrendFactor = 2.0;
constexpr double kNaturalSlack = 1e-12;

std::string status(bool ok) { return ok ? kStatusPass : kStatusFail; }

bool is_guard(const std::string& kind) { return kind == "pole" || kind == "near_zero"; }

// Cells are computed concurrently into fixed slots; numerical guards turn into
// flagged rows instead of aborting the sweep.
template <typename Compute, typename Flagged>
std::vector<Row> sweep(std::size_t count, Execution exec, const Compute& compute, const Flagged& flagged) {
    std::vector<Row> rows(count);
    for_each_index(
        count,
        [&](std::size_t i) {
            try {
                rows[i] = compute(i);
            } catch (const Error& e) {
                rows[i] = flagged(i, std::string(e.kind()));
            }
        },
        exec);
    return rows;
}

Report start(const RunConfig& cfg, std::vector<std::string> columns) {
    cfg.validate();
    Report r;
    r.command = to_string(cfg.command);
    r.columns = std::move(columns);
    r.config = cfg.to_json();
    return r;
}

std::size_t column(const Report& r, const char* name) {
    const auto it = std::find(r.columns.begin(), r.columns.end(), name);
    return it == r.columns.end() ? r.columns.size() : static_cast<std::size_t>(it - r.columns.begin());
}

void finish(Report& r, std::vector<Row> rows) {
    const std::size_t st = column(r, "status");
    const std::size_t fl = column(r, "flag");
    for (auto& row : rows) {
        if (st < row.size() && std::get<std::string>(row[st]) == kStatusFail) ++r.tolerance_failures;
        if (fl < row.size()) {
            const auto& flag = std::get<std::string>(row[fl]);
            if (!flag.empty() && !is_guard(flag)) ++r.hard_errors;
        }
        r.add_row(std::move(row));
    }
}

double max_of(const Report& r, const char* name) {
    const std::size_t c = column(r, name);
    double m = kNaN;
    for (const auto& row : r.rows) {
        const auto* v = std::get_if<double>(&row[c]);
        if (v && std::isfinite(*v) && !(*v <= m)) m = *v;
    }
    return m;
}

// Least-squares slope of y on x.
double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    if (x.size() < 2) return kNaN;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= n, my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
    return sxx > 0 ? sxy / sxx : kNaN;
}

std::string key(const char* prefix, double value) { return std::string(prefix) + "=" + format_number(value); }

std::vector<std::int64_t> sorted_unique(std::vector<std::int64_t> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

json complex_list(const std::vector<Complex>& zs) {
    json out = json::array();
    for (Complex z : zs) out.push_back({z.real(), z.imag()});
    return out;
}

std::vector<Complex> parse_complex_list(const json& j) {
    std::vector<Complex> out;
    for (const auto& item : j) {
        if (item.is_number()) out.emplace_back(item.get<double>(), 0.0);
        else if (item.is_array() && item.size() == 2) out.emplace_back(item[0].get<double>(), item[1].get<double>());
        else throw ConfigError("complex values must be numbers or [re, im] pairs");
    }
    return out;
}

json range_json(const Range& r) { return {{"min", r.min}, {"max", r.max}, {"steps", r.steps}}; }

void read_range(const json& j, Range& r) {
    if (j.contains("min")) r.min = j.at("min").get<double>();
    if (j.contains("max")) r.max = j.at("max").get<double>();
    if (j.contains("steps")) r.steps = j.at("steps").get<int>();
}

}  // namespace

std::string to_string(Command command) {
    for (const auto& [c, name] : kCommandNames)
        if (c == command) return name;
    throw ConfigError("unknown command");
}

Command command_from_string(const std::string& name) {
    for (const auto& [c, n] : kCommandNames)
        if (name == n) return c;
    throw ConfigError("unknown command '" + name + "'");
}

const std::vector<Command>& all_commands() {
    static const std::vector<Command> commands = [] {
        std::vector<Command> v;
        for (const auto& entry : kCommandNames) v.push_back(entry.first);
        return v;
    }();
    return commands;
}

void Range::validate(const std::string& name) const {
    if (!std::isfinite(min) || !std::isfinite(max)) throw ConfigError(name + " range must be finite");
    if (min > max) throw ConfigError(name + " range is empty (min > max)");
    if (steps < 1) throw ConfigError(name + " steps must be >= 1");
}

std::vector<double> Range::linear() const {
    std::vector<double> v(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) v[i] = steps == 1 ? min : min + (max - min) * i / (steps - 1);
    return v;
}

std::vector<double> Range::geometric() const {
    if (!(min > 0.0)) throw ConfigError("geometric range needs min > 0");
    std::vector<double> v(static_cast<std::size_t>(steps));
    const double ratio = std::log(max / min);
    for (int i = 0; i < steps; ++i) v[i] = steps == 1 ? min : min * std::exp(ratio * i / (steps - 1));
    v.back() = steps == 1 ? min : max;
    return v;
}

RunConfig RunConfig::defaults(Command command) {
    RunConfig c;
    c.command = command;
    c.t = {2.0, 200.0, 100};
    c.a = {0.0, 0.5, 6};
    switch (command) {
        case Command::ratio_sweep:
            c.t = {2.0, 500.0, 100};
            c.a = {0.0, 3.0, 16};
            c.eps = {0.05, 0.1};
            break;
        case Command::gamma_identity:
            break;
        case Command::growth_check:
            c.t = {5.0, 500.0, 100};
            c.a = {0.25, 0.75, 5};
            break;
        case Command::fep_eval:
            c.t = {1e-3, 10.0, 25};
            c.eps = {0.1, 0.3, 0.5, 1.0};
            break;
        case Command::mellin_check:
            c.eps = {0.3, 0.6, 1.0};
            c.s = {{2.0, 0.0}, {3.0, 0.0}, {2.0, 5.0}, {0.5, 0.0}};
            break;
        case Command::geps_compare:
            c.t = {0.5, 10.0, 8};
            c.eps = {0.2};
            c.quad = {2000.0, 16000, 16};
            break;
        case Command::nb_distance:
            c.eps = {0.05, 0.1};
            c.bign = {1, 2, 4, 8, 16, 32, 100, 1000};
            break;
        case Command::bs_residual:
            c.t = {0.0, 0.0, 1};
            c.eps = {0.25};
            c.bign = {100, 1000, 10000, 100000};
            break;
        case Command::causality_check:
            c.eps = {0.1, 0.2, 0.4};
            c.z = {{0.0, 0.0}, {-1.0, 0.0}, {-2.0, 0.0}};
            c.quad = {2000.0, 16000, 16};
            break;
        case Command::zeta_selftest:
            c.t = {1.0, 200.0, 40};
            c.a = {0.1, 0.9, 5};
            break;
    }
    return c;
}

void RunConfig::validate() const {
    t.validate("t");
    a.validate("a");
    quad.validate();
    eval.validate();
    for (double e : eps)
        if (!(e > 0.0) || !std::isfinite(e)) throw ConfigError("eps values must be positive");
    for (std::int64_t n : bign)
        if (n < 1) throw ConfigError("N values must be >= 1");
    auto need = [this](bool ok, const char* what) {
        if (!ok) throw ConfigError(to_string(command) + " needs " + what);
    };
    switch (command) {
        case Command::ratio_sweep:
            need(!eps.empty(), "at least one eps");
            need(a.min >= 0.0, "A >= 0");
            break;
        case Command::gamma_identity:
            need(a.min >= 0.0, "A >= 0");
            break;
        case Command::growth_check:
        case Command::zeta_selftest:
            break;
        case Command::fep_eval:
        case Command::geps_compare:
            need(!eps.empty(), "at least one eps");
            need(t.min > 0.0, "t > 0");
            break;
        case Command::mellin_check:
            need(!eps.empty(), "at least one eps");
            need(!s.empty(), "at least one s");
            break;
        case Command::nb_distance:
            need(!bign.empty(), "at least one N");
            need(*std::max_element(bign.begin(), bign.end()) <= 10'000, "N <= 10^4");
            break;
        case Command::bs_residual:
            need(!eps.empty() && !bign.empty(), "eps and N values");
            need(*std::max_element(bign.begin(), bign.end()) <= 10'000'000, "N <= 10^7");
            break;
        case Command::causality_check:
            need(!eps.empty() && !z.empty(), "eps and z values");
            break;
    }
}

json RunConfig::to_json() const {
    json j;
    j["command"] = to_string(command);
    j["t"] = range_json(t);
    j["a"] = range_json(a);
    j["eps"] = eps;
    j["bign"] = bign;
    j["z"] = complex_list(z);
    j["s"] = complex_list(s);
    j["quad"] = {{"T", quad.T}, {"panels", quad.panels}, {"points_per_panel", quad.points_per_panel}};
    j["eval"] = {{"euler_maclaurin_terms", eval.euler_maclaurin_terms},
                 {"bernoulli_order", eval.bernoulli_order},
                 {"target_abs_error", eval.target_abs_error}};
    j["output_path"] = output_path;
    j["format"] = format == OutputFormat::csv ? "csv" : "json";
    return j;
}

RunConfig RunConfig::from_json(const json& doc) {
    const json& j = doc.contains("config") ? doc.at("config") : doc;
    try {
        if (!j.contains("command")) throw ConfigError("config has no command");
        RunConfig c = defaults(command_from_string(j.at("command").get<std::string>()));
        if (j.contains("t")) read_range(j.at("t"), c.t);
        if (j.contains("a")) read_range(j.at("a"), c.a);
        if (j.contains("eps")) c.eps = j.at("eps").get<std::vector<double>>();
        if (j.contains("bign")) c.bign = j.at("bign").get<std::vector<std::int64_t>>();
        if (j.contains("z")) c.z = parse_complex_list(j.at("z"));
        if (j.contains("s")) c.s = parse_complex_list(j.at("s"));
        if (j.contains("quad")) {
            const json& q = j.at("quad");
            if (q.contains("T")) c.quad.T = q.at("T").get<double>();
            if (q.contains("panels")) c.quad.panels = q.at("panels").get<int>();
            if (q.contains("points_per_panel")) c.quad.points_per_panel = q.at("points_per_panel").get<int>();
        }
        if (j.contains("eval")) {
            const json& e = j.at("eval");
            if (e.contains("euler_maclaurin_terms")) c.eval.euler_maclaurin_terms = e.at("euler_maclaurin_terms").get<int>();
            if (e.contains("bernoulli_order")) c.eval.bernoulli_order = e.at("bernoulli_order").get<int>();
            if (e.contains("target_abs_error")) c.eval.target_abs_error = e.at("target_abs_error").get<double>();
        }
        if (j.contains("output_path")) c.output_path = j.at("output_path").get<std::string>();
        if (j.contains("format")) {
            const auto f = j.at("format").get<std::string>();
            if (f != "csv" && f != "json") throw ConfigError("format must be csv or json");
            c.format = f == "csv" ? OutputFormat::csv : OutputFormat::json;
        }
        return c;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
}

Report run_ratio_sweep(const RunConfig& cfg, Execution exec) {
    Report rep = start(cfg, {"t", "A", "abs_s", "ratio", "eps", "reference", "ratio_over_reference", "status", "flag"});
    const auto ts = cfg.t.linear();
    const auto as = cfg.a.linear();
    const std::size_t nt = ts.size();

    // One ratio per (A, t); rows then fan out over the reference exponents.
    std::vector<double> ratio(as.size() * nt, kNaN);
    std::vector<std::string> flags(ratio.size());
    for_each_index(
        ratio.size(),
        [&](std::size_t i) {
            const Complex s(0.5, ts[i % nt]);
            try {
                ratio[i] = std::abs(zeta_ratio(s, as[i / nt], cfg.eval));
            } catch (const Error& e) {
                flags[i] = e.kind();
            }
        },
        exec);

    std::vector<Row> rows;
    for (std::size_t ia = 0; ia < as.size(); ++ia) {
        const double A = as[ia];
        std::vector<double> lx, ly;
        std::vector<double> worst(cfg.eps.size(), 0.0);
        for (std::size_t it = 0; it < nt; ++it) {
            const std::size_t i = ia * nt + it;
            const double abs_s = std::abs(Complex(0.5, ts[it]));
            if (flags[i].empty() && ratio[i] > 0.0) {
                lx.push_back(std::log(abs_s));
                ly.push_back(std::log(ratio[i]));
            }
            for (std::size_t ie = 0; ie < cfg.eps.size(); ++ie) {
                const double ref = std::pow(abs_s, std::min(cfg.eps[ie], 0.5 * A));
                const double q = ratio[i] / ref;
                if (flags[i].empty()) worst[ie] = std::max(worst[ie], q);
                rows.push_back({ts[it], A, abs_s, ratio[i], cfg.eps[ie], ref, q,
                                std::string(flags[i].empty() ? kStatusDiagnostic : kStatusFlagged), flags[i]});
            }
        }
        rep.summary[key("slope.A", A)] = fitted_slope(lx, ly);
        for (std::size_t ie = 0; ie < cfg.eps.size(); ++ie)
            rep.summary[key("constant.A", A) + key(".eps", cfg.eps[ie])] = worst[ie];
    }
    finish(rep, std::move(rows));
    return rep;
}

Report run_gamma_identity(const RunConfig& cfg, Execution exec) {
    Report rep = start(cfg, {"t", "A", "lhs", "rhs", "abs_diff", "tolerance", "status", "flag"});
    const auto ts = cfg.t.linear();
    const auto as = cfg.a.linear();
    const std::size_t nt = ts.size();
    auto rows = sweep(
        as.size() * nt, exec,
        [&](std::size_t i) -> Row {
            const double t = ts[i % nt], A = as[i / nt];
            const Complex s(0.5, t);
            const double lhs = std::abs(zeta_ratio(s - 0.5 * A, A, cfg.eval));
            const double rhs = std::abs(gamma_plus(s + 0.5 * A));
            const double diff = std::abs(lhs - rhs);
            return {t, A, lhs, rhs, diff, kGammaIdentityTolerance, status(diff <= kGammaIdentityTolerance),
                    std::string()};
        },
        [&](std::size_t i, const std::string& kind) -> Row {
            return {ts[i % nt], as[i / nt], kNaN, kNaN, kNaN, kGammaIdentityTolerance, std::string(kStatusFlagged),
                    kind};
        });
    finish(rep, std::move(rows));
    rep.summary["max_abs_diff"] = max_of(rep, "abs_diff");
    rep.summary["cells"] = static_cast<std::int64_t>(rep.rows.size());
    return rep;
}

Report run_growth_check(const RunConfig& cfg, Execution exec) {
    Report rep = start(cfg, {"sigma", "abs_w", "gamma_plus_abs", "ratio", "asymptote", "rel_dev", "status", "flag"});
    const auto sigmas = cfg.a.linear();
    const auto moduli = cfg.t.linear();
    const std::size_t nw = moduli.size();
    auto rows = sweep(
        sigmas.size() * nw, exec,
        [&](std::size_t i) -> Row {
            const double sigma = sigmas[i / nw], m = moduli[i % nw];
            if (!(m > std::abs(sigma))) throw DomainError("|w| must exceed |sigma|");
            const Complex w(sigma, std::sqrt(m * m - sigma * sigma));
            const double g = std::abs(gamma_plus(w));
            const double ratio = g / std::pow(m, sigma - 0.5);
            const double asym = std::pow(2.0 * kPi, 0.5 - sigma);
            return {sigma, m, g, ratio, asym, std::abs(ratio / asym - 1.0), std::string(kStatusDiagnostic),
                    std::string()};
        },
        [&](std::size_t i, const std::string& kind) -> Row {
            return {sigmas[i / nw], moduli[i % nw], kNaN, kNaN, kNaN, kNaN, std::string(kStatusFlagged), kind};
        });
    finish(rep, std::move(rows));
    rep.summary["max_ratio"] = max_of(rep, "ratio");
    rep.summary["max_rel_dev"] = max_of(rep, "rel_dev");
    return rep;
}

Report run_fep_eval(const RunConfig& cfg, Execution exec) {
    Report rep = start(cfg, {"eps", "t", "series", "finite", "abs_diff", "tolerance", "bound", "series_terms",
                             "tail_closed", "tail_bound", "status", "flag"});
    const auto ts = cfg.t.geometric();
    const std::size_t nt = ts.size();
    const double t_floor = std::max(cfg.t.min, BDParams::kMinT);
    const MobiusTable table =
        mobius_sieve(std::max<std::int64_t>(1 << 17, static_cast<std::int64_t>(std::ceil(2.0 / t_floor)) + 2));
    std::vector<double> zeta1e(cfg.eps.size());
    for (std::size_t ie = 0; ie < cfg.eps.size(); ++ie) zeta1e[ie] = zeta_real(1.0 + cfg.eps[ie], cfg.eval);

    auto rows = sweep(
        cfg.eps.size() * nt, exec,
        [&](std::size_t i) -> Row {
            const std::size_t ie = i / nt;
            const BDParams p{cfg.eps[ie], ts[i % nt]};
            const SeriesEvaluation series = f_eps_series_detail(p, table, kFepSeriesTol, cfg.eval);
            const double finite = f_eps_finite(p, table, zeta1e[ie]);
            const double diff = std::abs(series.value - finite);
            const double bound = zeta1e[ie] / p.t;
            const bool ok = diff <= kFepTolerance && std::abs(finite) <= bound && std::abs(series.value) <= bound;
            return {p.eps, p.t, series.value, finite, diff, kFepTolerance, bound, series.terms,
                    static_cast<std::int64_t>(series.tail_closed), series.tail_bound, status(ok), std::string()};
        },
        [&](std::size_t i, const std::string& kind) -> Row {
            return {cfg.eps[i / nt], ts[i % nt], kNaN, kNaN, kNaN, kFepTolerance, kNaN, std::int64_t{0},
                    std::int64_t{0}, kNaN, std::string(kStatusFlagged), kind};
        });
    finish(rep, std::move(rows));
    rep.summary["max_abs_diff"] = max_of(rep, "abs_diff");
    return rep;
}

Report run_mellin_check(const RunConfig& cfg, Execution exec) {
    Report rep = start(cfg, {"check", "eps", "s_re", "s_im", "quadrature_re", "quadrature_im", "closed_re",
                             "closed_im", "abs_diff", "tail_bound", "panel_error", "tolerance", "status", "flag"});
    std::vector<Row> rows;
    auto result_row = [](const char* check, double eps, Complex s, const IntegralResult& q, Complex closed,
                         bool asserted) -> Row {
        const double diff = std::abs(q.value - closed);
        const double tol = kMellinTolerance + q.tail_bound;
        return {std::string(check), eps, s.real(), s.imag(), q.value.real(), q.value.imag(), closed.real(),
                closed.imag(), diff, q.tail_bound, q.panel_error_estimate, tol,
                asserted ? status(diff <= tol) : std::string(kStatusDiagnostic), std::string()};
    };
    auto flagged_row = [](const char* check, double eps, Complex s, const std::string& kind) -> Row {
        return {std::string(check), eps, s.real(), s.imag(), kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN,
                std::string(kStatusFlagged), kind};
    };
    auto in_strip = [](Complex s) { return s.real() > 0.0 && s.real() < 1.0; };

    // {1/t} has no eps; one row per strip point.
    for (Complex s : cfg.s) {
        if (!in_strip(s)) continue;
        try {
            rows.push_back(result_row("fractional_part", kNaN, s, fractional_part_mellin(s), -zeta(s, cfg.eval) / s, true));
        } catch (const Error& e) {
            rows.push_back(flagged_row("fractional_part", kNaN, s, e.kind()));
        }
    }

    UnitMellinQuadratureOptions options;
    options.exec = exec;
    const MobiusTable table = mobius_sieve(std::int64_t{1} << (options.graded_levels + 2));
    std::vector<Complex> right;
    for (Complex s : cfg.s)
        if (s.real() > 1.0) right.push_back(s);

    for (double eps : cfg.eps) {
        std::vector<IntegralResult> unit;
        std::string unit_flag;
        try {
            if (!right.empty()) unit = f_eps_unit_interval_mellin_quadrature(eps, right, table, options, cfg.eval);
        } catch (const Error& e) {
            unit_flag = e.kind();
        }
        std::size_t k = 0;
        for (Complex s : cfg.s) {
            try {
                if (s.real() > 1.0) {
                    const std::size_t idx = k++;
                    if (!unit_flag.empty()) {
                        rows.push_back(flagged_row("unit_interval", eps, s, unit_flag));
                        continue;
                    }
                    rows.push_back(result_row("unit_interval", eps, s, unit[idx],
                                              f_eps_unit_interval_mellin_closed(eps, s, cfg.eval), true));
                } else if (in_strip(s)) {
                    // The bound near u = 0 is empirical here, so these rows are diagnostics.
                    rows.push_back(result_row("strip", eps, s, f_eps_mellin_quadrature(eps, s, table, options, cfg.eval),
                                              f_eps_mellin_closed(eps, s, cfg.eval), false));
                } else {
                    throw DomainError("mellin-check needs 0 < Re(s) < 1 or Re(s) > 1");
                }
            } catch (const Error& e) {
                rows.push_back(flagged_row(s.real() > 1.0 ? "unit_interval" : "strip", eps, s, e.kind()));
            }
        }
    }
    finish(rep, std::move(rows));
    rep.summary["max_abs_diff"] = max_of(rep, "abs_diff");
    return rep;
}

Report run_geps_compare(const RunConfig& cfg, Execution exec) {
    Report rep = start(cfg, {"eps", "t", "g_quadrature", "predicted", "abs_diff", "imag_residual", "truncation_drift",
                             "panel_error", "tail_bound", "tail_certified", "status", "flag"});
    const auto ts = cfg.t.geometric();
    const double t_floor = std::max(cfg.t.min, BDParams::kMinT);
    const MobiusTable table =
        mobius_sieve(std::max<std::int64_t>(1000, static_cast<std::int64_t>(std::ceil(2.0 / t_floor)) + 2));
    std::vector<Row> rows;
    for (double eps : cfg.eps) {
        try {
            for (const GEpsResult& g : g_eps(eps, ts, cfg.quad, table, cfg.eval, exec)) {
                const InverseMellinResult& m = g.transform;
                rows.push_back({eps, g.t, g.value, g.predicted, std::abs(g.value - g.predicted), m.imag_residual,
                                m.truncation_drift, m.panel_error_estimate, m.tail_bound,
                                static_cast<std::int64_t>(m.tail_certified), std::string(kStatusDiagnostic),
                                std::string()});
            }
        } catch (const Error& e) {
            for (double t : ts)
                rows.push_back({eps, t, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, std::int64_t{0},
                                std::string(kStatusFlagged), std::string(e.kind())});
        }
    }
    finish(rep, std::move(rows));
    rep.summary["max_abs_diff"] = max_of(rep, "abs_diff");
    rep.summary["max_truncation_drift"] = max_of(rep, "truncation_drift");
    return rep;
}

Report run_distance_table(const RunConfig& cfg, Execution exec) {
    Report rep = start(cfg, {"N", "scheme", "eps", "d2", "d2_log_n", "lower_bound_constant", "condition",
                             "tail_budget", "clamped", "status", "flag"});
    const auto ns = sorted_unique(cfg.bign);
    const double c0 = lower_bound_constant();
    auto log_n = [](std::int64_t n) { return std::log(static_cast<double>(n)); };

    std::vector<std::int64_t> small;
    for (std::int64_t n : ns)
        if (n <= kMaxGramDimension) small.push_back(n);

    // Optimal rows: one Gram system at the largest N, nested leading blocks below.
    std::map<std::int64_t, double> optimal;
    std::vector<Row> rows;
    GramSystem full;
    bool have_full = false;
    if (!small.empty()) {
        try {
            full = gram_system(static_cast<int>(small.back()), cfg.quad, cfg.eval, exec);
            have_full = true;
        } catch (const ConditioningError&) {
            // Fall through: each N is then solved on its own and may be flagged.
        }
    }
    double previous = std::numeric_limits<double>::infinity();
    for (std::int64_t n : small) {
        try {
            const GramSystem g =
                have_full ? full.leading(static_cast<int>(n)) : gram_system(static_cast<int>(n), cfg.quad, cfg.eval, exec);
            const DistanceReport d = optimal_distance(g);
            optimal[n] = d.d_squared;
            const bool ok = d.d_squared <= previous;
            previous = d.d_squared;
            rows.push_back({n, std::string("optimal"), kNaN, d.d_squared, d.d_squared * log_n(n), c0, d.condition,
                            d.tail_budget, static_cast<std::int64_t>(d.clamped), status(ok), std::string()});
        } catch (const Error& e) {
            rows.push_back({n, std::string("optimal"), kNaN, kNaN, kNaN, c0, kNaN, kNaN, std::int64_t{0},
                            std::string(kStatusFlagged), std::string(e.kind())});
        }
    }

    const MobiusTable table = mobius_sieve(std::max<std::int64_t>(ns.back(), 1));
    for (double eps : cfg.eps) {
        for (std::int64_t n : ns) {
            try {
                const DistanceReport d = natural_distance(static_cast<int>(n), eps, table, cfg.quad, cfg.eval, exec);
                const auto it = optimal.find(n);
                const std::string st =
                    it == optimal.end() ? kStatusDiagnostic : status(d.d_squared >= it->second - kNaturalSlack);
                rows.push_back({n, std::string("natural"), eps, d.d_squared, d.d_squared * log_n(n), c0, kNaN,
                                d.tail_budget, std::int64_t{0}, st, std::string()});
            } catch (const Error& e) {
                rows.push_back({n, std::string("natural"), eps, kNaN, kNaN, c0, kNaN, kNaN, std::int64_t{0},
                                std::string(kStatusFlagged), std::string(e.kind())});
            }
        }
    }
    finish(rep, std::move(rows));
    if (have_full) {
        rep.summary["gram_condition"] = full.condition;
        rep.summary["gram_min_eigenvalue"] = full.min_eigenvalue;
    }
    rep.summary["lower_bound_constant"] = c0;
    return rep;
}

Report run_bs_residual(const RunConfig& cfg, Execution exec) {
    Report rep = start(cfg, {"eps", "t", "N", "residual", "reference", "trend_factor", "status", "flag"});
    const auto ns = sorted_unique(cfg.bign);
    const auto ts = cfg.t.linear();
    const MobiusTable table = mobius_sieve(ns.back());
    const std::size_t nn = ns.size(), groups = cfg.eps.size() * ts.size();

    std::vector<double> residual(groups * nn, kNaN);
    std::vector<std::string> flags(residual.size());
    for_each_index(
        residual.size(),
        [&](std::size_t i) {
            const std::size_t g = i / nn;
            try {
                residual[i] = bs_residual(cfg.eps[g / ts.size()], ts[g % ts.size()], ns[i % nn], table, cfg.eval);
            } catch (const Error& e) {
                flags[i] = e.kind();
            }
        },
        exec);

    std::vector<Row> rows;
    for (std::size_t g = 0; g < groups; ++g) {
        const double eps = cfg.eps[g / ts.size()], t = ts[g % ts.size()];
        const double first = residual[g * nn];
        std::vector<double> lx, ly;
        for (std::size_t k = 0; k < nn; ++k) {
            const std::size_t i = g * nn + k;
            const auto n = static_cast<double>(ns[k]);
            const double factor = first / residual[i];
            std::string st = kStatusDiagnostic;
            if (!flags[i].empty()) st = kStatusFlagged;
            else if (k == nn - 1 && nn > 1) st = status(factor >= kBsTrendFactor);
            if (flags[i].empty() && residual[i] > 0.0) {
                lx.push_back(std::log(n));
                ly.push_back(std::log(residual[i]));
            }
            rows.push_back({eps, t, ns[k], residual[i], std::pow(n, -eps / 3.0), factor, st, flags[i]});
        }
        const std::string group = key("eps", eps) + key(".t", t);
        rep.summary["slope." + group] = fitted_slope(lx, ly);
        rep.summary["trend_factor." + group] = first / residual[g * nn + nn - 1];
    }
    finish(rep, std::move(rows));
    rep.summary["trend_threshold"] = kBsTrendFactor;
    return rep;
}

namespace {

// (1/2pi) int_{|t| > T} dt / (s (s - z)) on s = 1/2 + it. The ratio's Dirichlet
// series starts with 1, so the integrand averages to this term beyond T and
// the truncated integral is short by about its value.
Complex mean_tail(Complex z, double T) {
    if (z == Complex(0.0, 0.0)) return -T / (kPi * (0.25 + T * T));
    const auto pair = [T](Complex w) { return 2.0 * std::atan((0.5 - w) / T); };  // int_{|t|>T} dt / (s - w)
    return (pair(z) - pair(0.0)) / (2.0 * kPi * z);
}

}  // namespace

Report run_causality_check(const RunConfig& cfg, Execution exec) {
    Report rep = start(cfg, {"eps", "z_re", "z_im", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_diff", "tail_budget",
                             "panel_error", "tolerance", "mean_tail", "mean_corrected_diff", "status", "flag"});
    std::vector<Row> rows;
    auto flagged = [](double eps, Complex z, const std::string& kind) -> Row {
        return {eps, z.real(), z.imag(), kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN,
                std::string(kStatusFlagged), kind};
    };
    for (double eps : cfg.eps) {
        std::optional<CriticalLineSamples> samples;
        DecayEnvelope envelope;
        double zeta1e = 0.0;
        std::string setup_flag;
        try {
            envelope = shifted_ratio_envelope(eps, cfg.quad.T);
            zeta1e = zeta_real(1.0 + eps, cfg.eval);
            samples = CriticalLineSamples::sample_function(
                [eps, &cfg](Complex s) { return -shifted_ratio_transform(eps, s, cfg.eval); }, cfg.quad, exec);
        } catch (const Error& e) {
            setup_flag = e.kind();
        }
        for (Complex z : cfg.z) {
            if (!setup_flag.empty()) {
                rows.push_back(flagged(eps, z, setup_flag));
                continue;
            }
            try {
                if (z.real() > kCausalityMaxRealZ) throw DomainError("causality-check needs Re(z) <= 0.4");
                const IntegralResult lhs = hardy_projection(*samples, z, envelope);
                const Complex rhs = 1.0 / (zeta1e * (z - 0.5 * eps - 1.0));
                if (lhs.tail_bound >= std::abs(rhs))
                    throw EnvelopeError("tail budget exceeds |rhs|; raise T for this eps");
                const double diff = std::abs(lhs.value - rhs);
                const double tol = lhs.tail_bound + kCausalitySlack;
                const Complex tail = mean_tail(z, cfg.quad.T);
                rows.push_back({eps, z.real(), z.imag(), lhs.value.real(), lhs.value.imag(), rhs.real(), rhs.imag(),
                                diff, lhs.tail_bound, lhs.panel_error_estimate, tol, std::abs(tail),
                                std::abs(lhs.value + tail - rhs), status(diff <= tol), std::string()});
            } catch (const Error& e) {
                rows.push_back(flagged(eps, z, e.kind()));
            }
        }
    }
    finish(rep, std::move(rows));
    rep.summary["max_abs_diff"] = max_of(rep, "abs_diff");
    rep.summary["max_mean_corrected_diff"] = max_of(rep, "mean_corrected_diff");
    return rep;
}

namespace {

struct ZetaOracle {
    const char* name;
    Complex s;
    Complex value;
};

// 40-digit reference values, rounded to 20.
const std::array<ZetaOracle, 13> kZetaOracles{{
    {"zeta(2)", {2.0, 0.0}, {1.6449340668482264365, 0.0}},
    {"zeta(3)", {3.0, 0.0}, {1.2020569031595942854, 0.0}},
    {"zeta(0.5)", {0.5, 0.0}, {-1.4603545088095868129, 0.0}},
    {"zeta(0.75)", {0.75, 0.0}, {-3.4412853869452228944, 0.0}},
    {"zeta(1.2)", {1.2, 0.0}, {5.5915824411777507765, 0.0}},
    {"zeta(1.5)", {1.5, 0.0}, {2.6123753486854883433, 0.0}},
    {"zeta(0.5+100i)", {0.5, 100.0}, {2.6926198856813240905, -0.020386029602598161771}},
    {"zeta(2.5+100i)", {2.5, 100.0}, {1.1322143225832918015, -0.039876616810003985156}},
    {"zeta(0.3+40i)", {0.3, 40.0}, {0.74877520950422584142, -1.4408854406344404847}},
    {"zeta(0.8-250i)", {0.8, -250.0}, {0.5650876647259793464, -0.40899781427426850604}},
    {"zeta(1.5+480i)", {1.5, 480.0}, {1.8513471508408576072, 0.57365268412206115126}},
    {"zeta(3i)", {0.0, 3.0}, {0.43928267542694614055, -0.036471914772995705636}},
    {"zeta(3-7i)", {3.0, -7.0}, {1.0142003689711159321, -0.096125395858022432498}},
}};

}  // namespace

Report run_zeta_selftest(const RunConfig& cfg, Execution exec) {
    Report rep = start(cfg, {"check", "s_re", "s_im", "computed_re", "computed_im", "reference_re", "reference_im",
                             "abs_diff", "tolerance", "status", "flag"});
    auto value_row = [](const std::string& check, Complex s, Complex got, Complex want, double tol) -> Row {
        const double diff = std::abs(got - want);
        return {check, s.real(), s.imag(), got.real(), got.imag(), want.real(), want.imag(), diff, tol,
                status(diff <= tol), std::string()};
    };
    auto flagged_row = [](const std::string& check, Complex s, double tol, const std::string& kind) -> Row {
        return {check, s.real(), s.imag(), kNaN, kNaN, kNaN, kNaN, kNaN, tol, std::string(kStatusFlagged), kind};
    };

    std::vector<Row> rows = sweep(
        kZetaOracles.size(), exec,
        [&](std::size_t i) {
            const auto& o = kZetaOracles[i];
            return value_row(o.name, o.s, zeta(o.s, cfg.eval), o.value, kZetaOracleTolerance);
        },
        [&](std::size_t i, const std::string& kind) {
            return flagged_row(kZetaOracles[i].name, kZetaOracles[i].s, kZetaOracleTolerance, kind);
        });

    const Complex first_zero(0.5, 14.134725);
    try {
        rows.push_back(value_row("first_zero_modulus", first_zero, zeta(first_zero, cfg.eval), 0.0, kZeroModulusTolerance));
    } catch (const Error& e) {
        rows.push_back(flagged_row("first_zero_modulus", first_zero, kZeroModulusTolerance, e.kind()));
    }

    // zeta(1 - s) = gamma_plus(s) zeta(s) over the (sigma, t) grid.
    const auto sigmas = cfg.a.linear();
    const auto ts = cfg.t.linear();
    const std::size_t nt = ts.size();
    auto point = [&](std::size_t i) { return Complex(sigmas[i / nt], ts[i % nt]); };
    auto fe = sweep(
        sigmas.size() * nt, exec,
        [&](std::size_t i) {
            const Complex s = point(i);
            return value_row("functional_equation", s, zeta(1.0 - s, cfg.eval), gamma_plus(s) * zeta(s, cfg.eval),
                             kFunctionalEquationTolerance);
        },
        [&](std::size_t i, const std::string& kind) {
            return flagged_row("functional_equation", point(i), kFunctionalEquationTolerance, kind);
        });
    rows.insert(rows.end(), std::make_move_iterator(fe.begin()), std::make_move_iterator(fe.end()));
    finish(rep, std::move(rows));

    double fe_max = 0.0;
    const std::size_t diff_col = column(rep, "abs_diff");
    for (const auto& row : rep.rows)
        if (std::get<std::string>(row[0]) == "functional_equation") {
            const double d = std::get<double>(row[diff_col]);
            if (std::isfinite(d)) fe_max = std::max(fe_max, d);
        }
    rep.summary["functional_equation_max_abs_diff"] = fe_max;
    rep.summary["functional_equation_points"] = static_cast<std::int64_t>(sigmas.size() * nt);
    return rep;
}

Report run(const RunConfig& cfg, Execution exec) {
    switch (cfg.command) {
        case Command::ratio_sweep: return run_ratio_sweep(cfg, exec);
        case Command::gamma_identity: return run_gamma_identity(cfg, exec);
        case Command::growth_check: return run_growth_check(cfg, exec);
        case Command::fep_eval: return run_fep_eval(cfg, exec);
        case Command::mellin_check: return run_mellin_check(cfg, exec);
        case Command::geps_compare: return run_geps_compare(cfg, exec);
        case Command::nb_distance: return run_distance_table(cfg, exec);
        case Command::bs_residual: return run_bs_residual(cfg, exec);
        case Command::causality_check: return run_causality_check(cfg, exec);
        case Command::zeta_selftest: return run_zeta_selftest(cfg, exec);
    }
    throw ConfigError("unknown command");
}

int exit_code(const Report& report) {
    return report.tolerance_failures > 0 || report.hard_errors > 0 ? kExitToleranceFailure : 0;
}

}  // namespace nblab
