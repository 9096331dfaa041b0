#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace nblab {

using Cell = std::variant<double, std::int64_t, std::string>;

// Tabular output of one lab command. Columns are fixed per command; the
// schema version is bumped whenever a command's columns change.
struct Report {
    static constexpr int kSchemaVersion = 1;

    std::string command;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    nlohmann::json config;                       // full RunConfig echo
    std::map<std::string, Cell> summary;         // ordered, so output is stable
    int tolerance_failures = 0;
    int hard_errors = 0;

    void add_row(std::vector<Cell> row);
};

/// 12 significant digits; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double x);

/// '#'-prefixed metadata (schema, config as one JSON line, summary), the column
/// row, then data rows.
void write_csv(const Report& report, std::ostream& out);

/// {"schema", "command", "config", "summary", "rows": [{column: value}]}.
void write_json(const Report& report, std::ostream& out);

}  // namespace nblab
