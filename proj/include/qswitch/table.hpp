#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace qswitch {

using Cell = std::variant<double, std::int64_t, bool, std::string>;

enum class OutputFormat { Csv, Json };

OutputFormat output_format_from_string(std::string_view name);

/// Column-ordered result table plus a small key/value summary.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, Cell>> summary;

    void add_row(std::vector<Cell> row);
    void add_summary(std::string key, Cell value);
};

/// Header row, then one line per row. Doubles use 17 significant digits;
/// summary entries follow as "# key=value" trailer lines.
std::string to_csv(const Table& table);

/// {"command": ..., "columns": [...], "rows": [[...], ...], "summary": {...}}
std::string to_json(const Table& table, std::string_view command);

std::string format_double(double value);

} // namespace qswitch
