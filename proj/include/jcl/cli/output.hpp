// output.hpp — tables, CSV/JSON writers and the metadata header

#pragma once

#include "jcl/cli/config.hpp"

#include <json.hpp>

#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace jcl::cli {

// Empty cell (monostate) for models that were not run or failed.
using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::string> comments;   // extra "# ..." lines after the units line

    void add_row(std::vector<Cell> row);
};

std::string cell_text(const Cell& c);
nlohmann::json cell_json(const Cell& c);

void write_csv(std::ostream& os, const Table& t, const RunConfig& c);
nlohmann::json table_json(const Table& t);
nlohmann::json config_json(const RunConfig& c);

// Writes to c.out (or stdout for "-") in c.format. JSON output wraps the table with the
// config and any extra fields.
void emit_table(const Table& t, const RunConfig& c, const nlohmann::json& extra = nlohmann::json::object());

// Writes next to path, e.g. path + ".json". Skipped when path is "-".
void write_text_file(const std::string& path, const std::string& text);
std::string sidecar_path(const std::string& out, const std::string& suffix);

}  // namespace jcl::cli
