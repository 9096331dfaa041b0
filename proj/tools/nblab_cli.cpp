// Batch front end for the lab sweeps: one subcommand per experiment, CSV or
// JSON on stdout or --out. Exit status 0 on success, 2 when an asserted
// identity misses its tolerance, 1 for bad configuration.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "nblab/errors.hpp"
#include "nblab/kernels.hpp"
#include "nblab/lab.hpp"

namespace {

using nblab::Complex;

// "re" or "re:im".
Complex parse_complex(const std::string& text) {
    const auto colon = text.find(':');
    try {
        std::size_t used = 0;
        const double re = std::stod(text.substr(0, colon), &used);
        if (used != (colon == std::string::npos ? text.size() : colon)) throw std::invalid_argument(text);
        if (colon == std::string::npos) return {re, 0.0};
        const std::string im_text = text.substr(colon + 1);
        const double im = std::stod(im_text, &used);
        if (used != im_text.size()) throw std::invalid_argument(text);
        return {re, im};
    } catch (const std::logic_error&) {
        throw nblab::ConfigError("cannot parse complex value '" + text + "' (use re or re:im)");
    }
}

struct Overrides {
    double t_min = 0, t_max = 0, a_min = 0, a_max = 0, quad_T = 0, target_error = 0;
    int t_steps = 0, a_steps = 0, quad_panels = 0, quad_points = 0, em_terms = 0, bernoulli = 0;
    std::vector<double> eps;
    std::vector<std::int64_t> bign;
    std::vector<std::string> z, s;
    std::string out, format, config;
    bool serial = false;
};

template <typename T>
void apply(const CLI::App& app, const char* name, const T& value, T& target) {
    if (app.count(name) > 0) target = value;
}

nblab::RunConfig build_config(const CLI::App& app, nblab::Command command, const Overrides& o) {
    nblab::RunConfig cfg = nblab::RunConfig::defaults(command);
    if (!o.config.empty()) {
        std::ifstream in(o.config);
        if (!in) throw nblab::ConfigError("cannot open config file " + o.config);
        nlohmann::json doc;
        try {
            in >> doc;
        } catch (const nlohmann::json::exception& e) {
            throw nblab::ConfigError("config file is not valid JSON: " + std::string(e.what()));
        }
        cfg = nblab::RunConfig::from_json(doc);
        if (cfg.command != command)
            throw nblab::ConfigError("config file is for " + nblab::to_string(cfg.command) + ", not " +
                                     nblab::to_string(command));
    }
    apply(app, "--t-min", o.t_min, cfg.t.min);
    apply(app, "--t-max", o.t_max, cfg.t.max);
    apply(app, "--t-steps", o.t_steps, cfg.t.steps);
    apply(app, "--a-min", o.a_min, cfg.a.min);
    apply(app, "--a-max", o.a_max, cfg.a.max);
    apply(app, "--a-steps", o.a_steps, cfg.a.steps);
    apply(app, "--eps", o.eps, cfg.eps);
    apply(app, "--bign", o.bign, cfg.bign);
    apply(app, "--quad-T", o.quad_T, cfg.quad.T);
    apply(app, "--quad-panels", o.quad_panels, cfg.quad.panels);
    apply(app, "--quad-points", o.quad_points, cfg.quad.points_per_panel);
    apply(app, "--em-terms", o.em_terms, cfg.eval.euler_maclaurin_terms);
    apply(app, "--bernoulli", o.bernoulli, cfg.eval.bernoulli_order);
    apply(app, "--target-error", o.target_error, cfg.eval.target_abs_error);
    apply(app, "--out", o.out, cfg.output_path);
    if (app.count("--z") > 0) {
        cfg.z.clear();
        for (const auto& v : o.z) cfg.z.push_back(parse_complex(v));
    }
    if (app.count("--s") > 0) {
        cfg.s.clear();
        for (const auto& v : o.s) cfg.s.push_back(parse_complex(v));
    }
    if (app.count("--format") > 0)
        cfg.format = o.format == "json" ? nblab::OutputFormat::json : nblab::OutputFormat::csv;
    return cfg;
}

const char* describe(nblab::Command c) {
    using nblab::Command;
    switch (c) {
        case Command::ratio_sweep: return "|zeta(s)/zeta(s+A)| on the critical line against |s|^eps";
        case Command::gamma_identity: return "zeta ratio modulus against |gamma_plus| on the line";
        case Command::growth_check: return "|gamma_plus(sigma+iw)| against (|w|/2pi)^(sigma-1/2)";
        case Command::fep_eval: return "f_eps by its series and its finite form";
        case Command::mellin_check: return "Mellin transforms of f_eps and {1/t} by quadrature and closed form";
        case Command::geps_compare: return "g_eps by inverse Mellin against t^(-eps/2) f_eps(t)";
        case Command::nb_distance: return "optimal and natural Nyman-Beurling distances";
        case Command::bs_residual: return "Dirichlet partial sums of 1/zeta off the line";
        case Command::causality_check: return "Hardy-space projection of the shifted ratio";
        case Command::zeta_selftest: return "zeta oracles and the functional equation grid";
    }
    return "";
}

}  // namespace

int main(int argc, char** argv) {
    nblab::configure_threads_from_env();

    CLI::App app{"nblab: zeta-ratio, Mellin and Nyman-Beurling distance experiments"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    Overrides o;
    app.add_option("--t-min", o.t_min, "lower end of the t grid");
    app.add_option("--t-max", o.t_max, "upper end of the t grid");
    app.add_option("--t-steps", o.t_steps, "points in the t grid")->check(CLI::PositiveNumber);
    app.add_option("--a-min", o.a_min, "lower end of the A (or sigma) grid");
    app.add_option("--a-max", o.a_max, "upper end of the A (or sigma) grid");
    app.add_option("--a-steps", o.a_steps, "points in the A (or sigma) grid")->check(CLI::PositiveNumber);
    app.add_option("--eps", o.eps, "eps values")->delimiter(',');
    app.add_option("--bign", o.bign, "N values")->delimiter(',');
    app.add_option("--z", o.z, "z points for causality-check, re or re:im")->delimiter(',');
    app.add_option("--s", o.s, "s points for mellin-check, re or re:im")->delimiter(',');
    app.add_option("--quad-T", o.quad_T, "critical-line truncation height");
    app.add_option("--quad-panels", o.quad_panels, "Gauss-Legendre panels on [-T, T]");
    app.add_option("--quad-points", o.quad_points, "nodes per panel");
    app.add_option("--em-terms", o.em_terms, "minimum Euler-Maclaurin direct terms");
    app.add_option("--bernoulli", o.bernoulli, "Bernoulli correction terms");
    app.add_option("--target-error", o.target_error, "zeta remainder target");
    app.add_option("--out", o.out, "output file (default stdout)");
    app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--config", o.config, "JSON config or previous JSON report to re-run");
    app.add_flag("--serial", o.serial, "use the serial reference kernels");

    std::vector<std::pair<CLI::App*, nblab::Command>> subcommands;
    for (nblab::Command c : nblab::all_commands())
        subcommands.emplace_back(app.add_subcommand(nblab::to_string(c), describe(c)), c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : nblab::kExitConfigError;
    }

    try {
        nblab::Command command{};
        for (const auto& [sub, c] : subcommands)
            if (sub->parsed()) command = c;
        const nblab::RunConfig cfg = build_config(app, command, o);
        const nblab::Report report =
            nblab::run(cfg, o.serial ? nblab::Execution::serial : nblab::Execution::parallel);

        std::ostringstream text;
        if (cfg.format == nblab::OutputFormat::json) nblab::write_json(report, text);
        else nblab::write_csv(report, text);
        if (cfg.output_path.empty()) {
            std::cout << text.str();
        } else {
            std::ofstream out(cfg.output_path, std::ios::binary);
            if (!out) throw nblab::ConfigError("cannot write " + cfg.output_path);
            out << text.str();
        }
        std::cerr << "nblab " << report.command << ": " << report.rows.size() << " rows, "
                  << report.tolerance_failures << " tolerance failures, " << report.hard_errors
                  << " unexpected flags\n";
        return nblab::exit_code(report);
    } catch (const nblab::ConfigError& e) {
        std::cerr << "nblab: configuration error: " << e.what() << '\n';
        return nblab::kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "nblab: " << e.what() << '\n';
        return nblab::kExitToleranceFailure;
    }
}
