// output.cpp — CSV/JSON serialization

#include "jcl/cli/output.hpp"

#include "jcl/errors.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace jcl::cli {

void Table::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size()) throw std::logic_error("Table::add_row: wrong number of cells");
    rows.push_back(std::move(row));
}

std::string cell_text(const Cell& c) {
    struct {
        std::string operator()(std::monostate) const { return {}; }
        std::string operator()(double x) const { return format_double(x); }
        std::string operator()(long long x) const { return std::to_string(x); }
        std::string operator()(const std::string& s) const {
            if (s.find_first_of(",\"\n") == std::string::npos) return s;
            std::string q = "\"";
            for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            return q + "\"";
        }
    } v;
    return std::visit(v, c);
}

nlohmann::json cell_json(const Cell& c) {
    struct {
        nlohmann::json operator()(std::monostate) const { return nullptr; }
        nlohmann::json operator()(double x) const {
            // JSON has no inf/nan literals
            if (!std::isfinite(x)) return format_double(x);
            return x;
        }
        nlohmann::json operator()(long long x) const { return x; }
        nlohmann::json operator()(const std::string& s) const { return s; }
    } v;
    return std::visit(v, c);
}

void write_csv(std::ostream& os, const Table& t, const RunConfig& c) {
    os << "# jcl_run " << c.command << "\n";
    os << "# units: g=1\n";
    for (const auto& line : t.comments) os << "# " << line << "\n";
    os << "#! command = " << c.command << "\n";
    for (const auto& [k, v] : serialize(c)) os << "#! " << k << " = " << v << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
        os << "\n";
    }
}

nlohmann::json table_json(const Table& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json r = nlohmann::json::object();
        for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = cell_json(row[i]);
        rows.push_back(std::move(r));
    }
    return {{"columns", t.columns}, {"rows", rows}};
}

nlohmann::json config_json(const RunConfig& c) {
    nlohmann::json j = nlohmann::json::object();
    j["command"] = c.command;
    for (const auto& [k, v] : serialize(c)) j[k] = v;
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    f << text;
}

std::string sidecar_path(const std::string& out, const std::string& suffix) {
    if (out == "-") return "-";
    const auto dot = out.rfind('.');
    const auto slash = out.rfind('/');
    const bool has_ext = dot != std::string::npos && (slash == std::string::npos || dot > slash);
    return (has_ext ? out.substr(0, dot) : out) + suffix;
}

void emit_table(const Table& t, const RunConfig& c, const nlohmann::json& extra) {
    std::ostringstream os;
    if (c.format == "json") {
        nlohmann::json j = extra;
        j["units"] = "g=1";
        j["config"] = config_json(c);
        j["table"] = table_json(t);
        os << j.dump(2) << "\n";
    } else {
        write_csv(os, t, c);
    }
    write_text_file(c.out, os.str());
}

}  // namespace jcl::cli
