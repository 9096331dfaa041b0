#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "nblab/kernels.hpp"
#include "nblab/quadrature.hpp"
#include "nblab/report.hpp"
#include "nblab/special_functions.hpp"

namespace nblab {

enum class Command {
    ratio_sweep,
    gamma_identity,
    growth_check,
    fep_eval,
    mellin_check,
    geps_compare,
    nb_distance,
    bs_residual,
    causality_check,
    zeta_selftest,
};

std::string to_string(Command command);
Command command_from_string(const std::string& name);  // ConfigError on unknown names
const std::vector<Command>& all_commands();

enum class OutputFormat { csv, json };

struct Range {
    double min = 0.0;
    double max = 0.0;
    int steps = 1;

    void validate(const std::string& name) const;
    std::vector<double> linear() const;     // steps == 1 gives {min}
    std::vector<double> geometric() const;  // requires min > 0
};

// One reproducible experiment. Which fields a command reads:
//   ratio-sweep      t, a (= A), eps (reference exponents)
//   gamma-identity   t, a (= A)
//   growth-check     t (= |w|), a (= sigma)
//   fep-eval         t (geometric), eps
//   mellin-check     eps, s
//   geps-compare     t (geometric), eps, quad
//   nb-distance      eps, bign, quad
//   bs-residual      t, eps, bign
//   causality-check  eps, z, quad
//   zeta-selftest    t, a (= sigma of the functional-equation grid)
// Every field is echoed into the output regardless.
struct RunConfig {
    Command command = Command::zeta_selftest;
    Range t;
    Range a;
    std::vector<double> eps;
    std::vector<std::int64_t> bign;
    std::vector<Complex> z;
    std::vector<Complex> s;
    QuadratureSpec quad;
    EvalConfig eval;
    std::string output_path;  // empty means stdout
    OutputFormat format = OutputFormat::csv;

    static RunConfig defaults(Command command);

    /// Throws ConfigError.
    void validate() const;

    nlohmann::json to_json() const;

    /// Missing keys keep the defaults of the named command. Accepts either a
    /// bare config object or a whole JSON report (its "config" member).
    static RunConfig from_json(const nlohmann::json& doc);
};

// Row status values shared by every command.
inline constexpr const char* kStatusPass = "pass";
inline constexpr const char* kStatusFail = "fail";
inline constexpr const char* kStatusDiagnostic = "diagnostic";
inline constexpr const char* kStatusFlagged = "flagged";

Report run_ratio_sweep(const RunConfig& cfg, Execution exec = Execution::parallel);
Report run_gamma_identity(const RunConfig& cfg, Execution exec = Execution::parallel);
Report run_growth_check(const RunConfig& cfg, Execution exec = Execution::parallel);
Report run_fep_eval(const RunConfig& cfg, Execution exec = Execution::parallel);
Report run_mellin_check(const RunConfig& cfg, Execution exec = Execution::parallel);
Report run_geps_compare(const RunConfig& cfg, Execution exec = Execution::parallel);
Report run_distance_table(const RunConfig& cfg, Execution exec = Execution::parallel);
Report run_bs_residual(const RunConfig& cfg, Execution exec = Execution::parallel);
Report run_causality_check(const RunConfig& cfg, Execution exec = Execution::parallel);
Report run_zeta_selftest(const RunConfig& cfg, Execution exec = Execution::parallel);

/// Validates and dispatches on cfg.command.
Report run(const RunConfig& cfg, Execution exec = Execution::parallel);

/// 0 when nothing failed, 2 for tolerance failures or unexpected flags.
/// Configuration errors never reach a report; callers map them to 1.
int exit_code(const Report& report);

inline constexpr int kExitConfigError = 1;
inline constexpr int kExitToleranceFailure = 2;

}  // namespace nblab
