#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace jrc::cli {

using Cell = std::variant<double, long long, std::string>;

/// Column-ordered result table plus the `#` metadata block written above it.
struct Table {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);
};

/// 12 significant digits, C locale.
std::string format_number(double v);
std::string format_cell(const Cell& c);

std::string render_csv(const Table& t);
std::string render_json(const Table& t);

/// Writes `text` to a temporary file next to `path` and renames it into
/// place, so a failed run never leaves a truncated file behind.
void write_atomic(const std::string& path, const std::string& text);

/// CSV at `path`, JSON sidecar at the same stem with a .json extension.
void emit(const Table& t, const std::string& path);

std::string sidecar_path(const std::string& csv_path);

}  // namespace jrc::cli
