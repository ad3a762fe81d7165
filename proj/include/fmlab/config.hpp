#pragma once
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace fmlab {

/// Flat key=value configuration. '#' starts a comment; blank lines ignored.
class KeyValueConfig {
public:
    KeyValueConfig() = default;
    static KeyValueConfig parse(const std::string& text);
    static KeyValueConfig load(const std::string& path);

    bool has(const std::string& key) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    std::string require_string(const std::string& key) const;
    double require_double(const std::string& key) const;
    long long require_int(const std::string& key) const;
    /// Comma separated list of doubles.
    std::vector<double> get_double_list(const std::string& key) const;

    void set(const std::string& key, const std::string& value);
    const std::map<std::string, std::string>& entries() const { return values_; }

    /// Keys present in the file that no getter ever asked for.
    std::vector<std::string> unused_keys() const;

private:
    std::map<std::string, std::string> values_;
    mutable std::set<std::string> touched_;
};

}  // namespace fmlab
