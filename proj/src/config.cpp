#include "qswitch/config.hpp"
#include "qswitch/errors.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qswitch {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

class NumberParser {
public:
    explicit NumberParser(std::string_view text) : text_{text} {}

    double parse() {
        skip_space();
        double sign = 1.0;
        if (peek() == '-' || peek() == '+') {
            sign = take() == '-' ? -1.0 : 1.0;
            skip_space();
        }
        double value = factor();
        for (;;) {
            skip_space();
            const char op = peek();
            if (op != '*' && op != '/')
                break;
            take();
            skip_space();
            const double rhs = factor();
            if (op == '/' && rhs == 0.0)
                throw ConfigError{"division by zero in number '" + std::string{text_} + "'"};
            value = op == '*' ? value * rhs : value / rhs;
        }
        skip_space();
        if (pos_ != text_.size())
            fail();
        return sign * value;
    }

private:
    double factor() {
        if (starts_with_pi()) {
            pos_ += 2;
            return std::numbers::pi;
        }
        double value = 0.0;
        const char* first = text_.data() + pos_;
        const char* last = text_.data() + text_.size();
        const auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{} || ptr == first)
            fail();
        pos_ += static_cast<std::size_t>(ptr - first);
        if (starts_with_pi()) {
            pos_ += 2;
            value *= std::numbers::pi;
        }
        return value;
    }

    bool starts_with_pi() const { return text_.substr(pos_, 2) == "pi"; }
    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
    char take() { return text_[pos_++]; }
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }
    [[noreturn]] void fail() const {
        throw ConfigError{"cannot parse number '" + std::string{text_} + "'"};
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

void flatten(const nlohmann::json& node, const std::string& prefix, Config& out) {
    if (node.is_object()) {
        for (const auto& [key, child] : node.items())
            flatten(child, prefix.empty() ? key : prefix + "." + key, out);
        return;
    }
    if (prefix.empty())
        throw ConfigError{"JSON configuration must be an object"};
    const auto scalar = [](const nlohmann::json& v) -> std::string {
        if (v.is_string())
            return v.get<std::string>();
        if (v.is_boolean())
            return v.get<bool>() ? "true" : "false";
        if (v.is_number())
            return v.dump();
        throw ConfigError{"unsupported JSON value " + v.dump()};
    };
    if (node.is_array()) {
        std::string joined;
        for (const auto& item : node) {
            if (!joined.empty())
                joined += ", ";
            joined += scalar(item);
        }
        out.set(prefix, joined);
    } else {
        out.set(prefix, scalar(node));
    }
}

Config parse_key_value(std::string_view text) {
    Config cfg;
    std::istringstream in{std::string{text}};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos)
            view = view.substr(0, hash);
        view = trim(view);
        if (view.empty())
            continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError{"line " + std::to_string(line_no) + ": expected 'key = value'"};
        const auto key = trim(view.substr(0, eq));
        const auto value = trim(view.substr(eq + 1));
        if (key.empty())
            throw ConfigError{"line " + std::to_string(line_no) + ": empty key"};
        if (cfg.has(std::string{key}))
            throw ConfigError{"line " + std::to_string(line_no) + ": duplicate key '" + std::string{key} + "'"};
        cfg.set(std::string{key}, std::string{value});
    }
    return cfg;
}

} // namespace

double parse_number(std::string_view text) {
    text = trim(text);
    if (text.empty())
        throw ConfigError{"empty number"};
    return NumberParser{text}.parse();
}

Config Config::parse(std::string_view text, ConfigSyntax syntax) {
    if (syntax == ConfigSyntax::Auto) {
        const auto body = trim(text);
        syntax = (!body.empty() && body.front() == '{') ? ConfigSyntax::Json : ConfigSyntax::KeyValue;
    }
    if (syntax == ConfigSyntax::KeyValue)
        return parse_key_value(text);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError{std::string{"invalid JSON configuration: "} + e.what()};
    }
    Config cfg;
    flatten(doc, "", cfg);
    return cfg;
}

void Config::set(std::string key, std::string value) { values_[std::move(key)] = std::move(value); }

bool Config::has(const std::string& key) const { return values_.contains(key); }

const std::string* Config::find(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end())
        return nullptr;
    used_.insert(key);
    return &it->second;
}

std::string Config::text(const std::string& key) const {
    if (const auto* v = find(key))
        return *v;
    throw ConfigError{"missing required key '" + key + "'"};
}

std::string Config::text(const std::string& key, std::string fallback) const {
    const auto* v = find(key);
    return v ? *v : fallback;
}

double Config::number(const std::string& key) const {
    const auto value = text(key);
    try {
        return parse_number(value);
    } catch (const ConfigError& e) {
        throw ConfigError{key + ": " + e.what()};
    }
}

double Config::number(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

std::optional<double> Config::optional_number(const std::string& key) const {
    if (!has(key))
        return std::nullopt;
    return number(key);
}

long long Config::integer(const std::string& key, long long fallback) const {
    if (!has(key))
        return fallback;
    const double v = number(key);
    if (!std::isfinite(v) || v != std::floor(v) || std::abs(v) > 9e15)
        throw ConfigError{key + ": expected an integer"};
    return static_cast<long long>(v);
}

std::vector<double> Config::numbers(const std::string& key, std::vector<double> fallback) const {
    const auto* v = find(key);
    if (!v)
        return fallback;
    std::vector<double> out;
    std::string_view rest = *v;
    if (!rest.empty() && rest.front() == '[' && rest.back() == ']')
        rest = rest.substr(1, rest.size() - 2);
    while (!trim(rest).empty()) {
        const auto comma = rest.find(',');
        const auto item = rest.substr(0, comma);
        try {
            out.push_back(parse_number(item));
        } catch (const ConfigError& e) {
            throw ConfigError{key + ": " + e.what()};
        }
        if (comma == std::string_view::npos)
            break;
        rest = rest.substr(comma + 1);
    }
    if (out.empty())
        throw ConfigError{key + ": empty list"};
    return out;
}

std::vector<std::string> Config::unused_keys() const {
    std::vector<std::string> out;
    for (const auto& [key, value] : values_)
        if (!used_.contains(key))
            out.push_back(key);
    return out;
}

} // namespace qswitch
