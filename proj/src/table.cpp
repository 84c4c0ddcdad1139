#include "qswitch/table.hpp"
#include "qswitch/errors.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>

namespace qswitch {

OutputFormat output_format_from_string(std::string_view name) {
    if (name == "csv")
        return OutputFormat::Csv;
    if (name == "json")
        return OutputFormat::Json;
    throw ConfigError{"unknown output format '" + std::string{name} + "' (expected csv or json)"};
}

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size())
        throw std::logic_error{"row width does not match the column count"};
    rows.push_back(std::move(row));
}

void Table::add_summary(std::string key, Cell value) { summary.emplace_back(std::move(key), std::move(value)); }

std::string format_double(double value) {
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

std::string cell_text(const Cell& cell) {
    struct Visitor {
        std::string operator()(double v) const { return format_double(v); }
        std::string operator()(std::int64_t v) const { return std::to_string(v); }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
        std::string operator()(const std::string& v) const { return v; }
    };
    return std::visit(Visitor{}, cell);
}

nlohmann::ordered_json cell_json(const Cell& cell) {
    struct Visitor {
        nlohmann::ordered_json operator()(double v) const {
            // JSON has no inf/nan; keep them readable as strings
            return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(format_double(v));
        }
        nlohmann::ordered_json operator()(std::int64_t v) const { return v; }
        nlohmann::ordered_json operator()(bool v) const { return v; }
        nlohmann::ordered_json operator()(const std::string& v) const { return v; }
    };
    return std::visit(Visitor{}, cell);
}

} // namespace

std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i)
            out += ',';
        out += table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                out += ',';
            out += cell_text(row[i]);
        }
        out += '\n';
    }
    for (const auto& [key, value] : table.summary)
        out += "# " + key + "=" + cell_text(value) + "\n";
    return out;
}

std::string to_json(const Table& table, std::string_view command) {
    nlohmann::ordered_json doc;
    doc["command"] = std::string{command};
    doc["columns"] = table.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : table.rows) {
        auto r = nlohmann::ordered_json::array();
        for (const auto& cell : row)
            r.push_back(cell_json(cell));
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    auto summary = nlohmann::ordered_json::object();
    for (const auto& [key, value] : table.summary)
        summary[key] = cell_json(value);
    doc["summary"] = std::move(summary);
    return doc.dump(2) + "\n";
}

} // namespace qswitch
