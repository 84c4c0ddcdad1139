#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace qswitch {

enum class ConfigSyntax { Auto, KeyValue, Json };

/// Parses a scalar such as "0.25", "-1e-3", "pi/8" or "2pi*3e9": a product or
/// quotient of numeric factors, where a factor is a number, "pi", or a number
/// immediately followed by "pi". Throws ConfigError.
double parse_number(std::string_view text);

/// Flat dotted-key configuration, e.g.
///
///     # comment
///     lattice.lambda = -0.5
///     sweep.k = pi/8, pi/4, pi/2
///
/// JSON input is flattened to the same keys ({"lattice": {"lambda": -0.5}}
/// gives "lattice.lambda"); arrays become comma-separated lists.
///
/// Every lookup marks its key as used so typos can be reported with
/// unused_keys() once a command has read what it needs.
class Config {
public:
    Config() = default;

    static Config parse(std::string_view text, ConfigSyntax syntax = ConfigSyntax::Auto);

    void set(std::string key, std::string value);
    bool has(const std::string& key) const;

    std::string text(const std::string& key) const;
    std::string text(const std::string& key, std::string fallback) const;
    double number(const std::string& key) const;
    double number(const std::string& key, double fallback) const;
    std::optional<double> optional_number(const std::string& key) const;
    long long integer(const std::string& key, long long fallback) const;
    std::vector<double> numbers(const std::string& key, std::vector<double> fallback) const;

    std::vector<std::string> unused_keys() const;
    const std::map<std::string, std::string>& entries() const { return values_; }

private:
    const std::string* find(const std::string& key) const;

    std::map<std::string, std::string> values_;
    mutable std::set<std::string> used_;
};

} // namespace qswitch
