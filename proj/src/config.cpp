#include "logschroed/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "logschroed/errors.hpp"
#include "logschroed/io.hpp"

namespace logschroed {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

bool valid_key(const std::string& k) {
    if (k.empty() || k.front() == '.' || k.back() == '.' || k.find("..") != std::string::npos) return false;
    return std::all_of(k.begin(), k.end(),
                       [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; });
}

double to_double(const std::string& s, int line, const std::string& key) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw ConfigError(key + ": not a number: '" + s + "'", line);
    if (!std::isfinite(x)) throw ConfigError(key + ": value must be finite", line);
    return x;
}

}  // namespace

Config Config::parse(const std::string& text) {
    Config c;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value", line);
        const std::string key = trim(s.substr(0, eq)), value = trim(s.substr(eq + 1));
        if (!valid_key(key)) throw ConfigError("malformed key '" + key + "'", line);
        if (value.empty()) throw ConfigError(key + ": empty value", line);
        if (c.values_.count(key)) throw ConfigError("duplicate key '" + key + "'", line);
        c.values_[key] = value;
        c.lines_[key] = line;
    }
    return c;
}

Config Config::load(const std::string& path) { return parse(read_file(path)); }

void Config::set(const std::string& key, const std::string& value) {
    values_[key] = value;
    lines_.erase(key);
}

int Config::line_of(const std::string& key) const {
    const auto it = lines_.find(key);
    return it == lines_.end() ? 0 : it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : to_double(it->second, line_of(key), key);
}

int Config::get_int(const std::string& key, int fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const double x = to_double(it->second, line_of(key), key);
    if (x != static_cast<double>(static_cast<int>(x))) throw ConfigError(key + ": expected an integer", line_of(key));
    return static_cast<int>(x);
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw ConfigError(key + ": expected true or false", line_of(key));
}

std::vector<double> Config::get_list(const std::string& key, const std::vector<double>& fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(trim(item), line_of(key), key));
    return out;
}

void Config::require_known(const std::set<std::string>& allowed) const {
    const std::string* first = nullptr;
    for (const auto& [k, v] : values_)
        if (!allowed.count(k) && (!first || line_of(k) < line_of(*first))) first = &k;
    if (first) throw ConfigError("unknown key '" + *first + "'", line_of(*first));
}

}  // namespace logschroed
