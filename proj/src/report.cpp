#include "nblab/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "nblab/errors.hpp"

namespace nblab {
namespace {

std::string format_cell(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) return format_number(*d);
    if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
    return std::get<std::string>(cell);
}

nlohmann::json cell_json(const Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) {
        if (std::isfinite(*d)) return std::stod(format_number(*d));
        return format_number(*d);
    }
    if (const auto* i = std::get_if<std::int64_t>(&cell)) return *i;
    return std::get<std::string>(cell);
}

}  // namespace

void Report::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size())
        throw ConfigError("report row has " + std::to_string(row.size()) + " cells, expected " +
                          std::to_string(columns.size()));
    rows.push_back(std::move(row));
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);  // no "-0"
    return buf;
}

void write_csv(const Report& report, std::ostream& out) {
    out << "# nblab " << report.command << " schema=" << Report::kSchemaVersion << '\n';
    out << "# config: " << report.config.dump() << '\n';
    for (const auto& [key, value] : report.summary) out << "# summary." << key << '=' << format_cell(value) << '\n';
    out << "# tolerance_failures=" << report.tolerance_failures << " hard_errors=" << report.hard_errors << '\n';
    for (std::size_t c = 0; c < report.columns.size(); ++c) out << (c ? "," : "") << report.columns[c];
    out << '\n';
    for (const auto& row : report.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << format_cell(row[c]);
        out << '\n';
    }
}

void write_json(const Report& report, std::ostream& out) {
    nlohmann::json doc;
    doc["schema"] = Report::kSchemaVersion;
    doc["command"] = report.command;
    doc["config"] = report.config;
    nlohmann::json summary = nlohmann::json::object();
    for (const auto& [key, value] : report.summary) summary[key] = cell_json(value);
    doc["summary"] = summary;
    doc["tolerance_failures"] = report.tolerance_failures;
    doc["hard_errors"] = report.hard_errors;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : report.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t c = 0; c < row.size(); ++c) obj[report.columns[c]] = cell_json(row[c]);
        rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << '\n';
}

}  // namespace nblab
