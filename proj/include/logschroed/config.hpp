#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace logschroed {

/// Flat `section.key = value` text. `#` starts a comment; blank lines are
/// ignored. Duplicate keys and malformed lines are ConfigErrors carrying the
/// 1-based line number.
class Config {
public:
    static Config parse(const std::string& text);
    static Config load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) > 0; }
    void set(const std::string& key, const std::string& value);

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    /// Comma-separated numbers.
    std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;

    /// Rejects any key outside `allowed`, reporting the first offender's line.
    void require_known(const std::set<std::string>& allowed) const;

    const std::map<std::string, std::string>& values() const { return values_; }
    int line_of(const std::string& key) const;

private:
    std::map<std::string, std::string> values_;
    std::map<std::string, int> lines_;
};

}  // namespace logschroed
