#include "logschroed/io.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include <unistd.h>

#include "logschroed/errors.hpp"

namespace logschroed {

std::string format_double(double x) {
    if (!std::isfinite(x)) throw DomainError("refusing to serialize a non-finite number");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);  // no "-0"
    return buf;
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return columns.at(i);
    throw DomainError("no column named " + name);
}

std::string to_csv(const CsvTable& t) {
    if (t.header.size() != t.columns.size()) throw DomainError("header and column counts differ");
    for (const auto& c : t.columns)
        if (c.size() != t.rows()) throw DomainError("ragged CSV columns");
    std::string out;
    for (std::size_t j = 0; j < t.header.size(); ++j) out += (j ? "," : "") + t.header[j];
    out += '\n';
    for (std::size_t i = 0; i < t.rows(); ++i) {
        for (std::size_t j = 0; j < t.columns.size(); ++j) {
            if (j) out += ',';
            out += format_double(t.columns[j][i]);
        }
        out += '\n';
    }
    return out;
}

CsvTable parse_csv(const std::string& text) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (t.header.empty()) {
            t.header = cells;
            t.columns.resize(cells.size());
            continue;
        }
        if (cells.size() != t.header.size()) throw ConfigError("wrong number of CSV fields", lineno);
        for (std::size_t j = 0; j < cells.size(); ++j) {
            std::size_t used = 0;
            double x = 0.0;
            try {
                x = std::stod(cells[j], &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != cells[j].size()) throw ConfigError("not a number: '" + cells[j] + "'", lineno);
            t.columns[j].push_back(x);
        }
    }
    if (t.header.empty()) throw ConfigError("empty CSV", 0);
    return t;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    static std::atomic<unsigned> counter{0};
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ostringstream name;
    name << path.filename().string() << ".tmp." << ::getpid() << '.'
         << std::hash<std::thread::id>{}(std::this_thread::get_id()) << '.' << counter++;
    const auto tmp = path.parent_path() / name.str();
    {
        std::ofstream out(tmp, std::ios::binary);
        out << content;
        if (!out.flush()) throw SolverError("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + path.string(), 0);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace logschroed
