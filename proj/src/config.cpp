#include "fsacf/config.hpp"

#include <charconv>
#include <fstream>

namespace fsacf {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
    return s;
}

// Drops a trailing comment that is not inside quotes.
std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

template <typename T>
bool parse_number(const std::string& text, T& out) {
    const auto s = trim(text);
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(std::istream& in) {
    KeyValueConfig cfg;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto body = trim(strip_comment(line));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(number) + ": expected key = value");
        }
        const auto key = trim(body.substr(0, eq));
        const auto value = trim(body.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(number) + ": empty key");
        if (cfg.values_.count(key)) {
            throw ConfigError("config line " + std::to_string(number) + ": duplicate key '" + key + "'");
        }
        cfg.values_[key] = value;
        cfg.lines_[key] = number;
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse(in);
}

bool KeyValueConfig::has(const std::string& key) const { return values_.count(key) != 0; }

ConfigError KeyValueConfig::bad_value(const std::string& key, const std::string& expected) const {
    return ConfigError("config line " + std::to_string(lines_.at(key)) + ": key '" + key + "' expects " + expected +
                       ", got '" + values_.at(key) + "'");
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : unquote(it->second);
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    if (!has(key)) return fallback;
    double v = 0.0;
    if (!parse_number(unquote(values_.at(key)), v)) throw bad_value(key, "a number");
    return v;
}

std::size_t KeyValueConfig::get_size(const std::string& key, std::size_t fallback) const {
    if (!has(key)) return fallback;
    std::size_t v = 0;
    if (!parse_number(unquote(values_.at(key)), v)) throw bad_value(key, "a nonnegative integer");
    return v;
}

std::uint64_t KeyValueConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    std::uint64_t v = 0;
    if (!parse_number(unquote(values_.at(key)), v)) throw bad_value(key, "an unsigned 64-bit integer");
    return v;
}

std::vector<std::string> KeyValueConfig::get_list(const std::string& key) const {
    std::vector<std::string> items;
    if (!has(key)) return items;
    auto text = values_.at(key);
    if (text.size() >= 2 && text.front() == '"' && text.back() == '"') text = text.substr(1, text.size() - 2);
    if (!text.empty() && text.front() == '[') {
        if (text.back() != ']') throw bad_value(key, "a closed list");
        text = text.substr(1, text.size() - 2);
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto item = trim(text.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (!item.empty()) items.push_back(unquote(item));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return items;
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key, std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    std::vector<double> out;
    for (const auto& item : get_list(key)) {
        double v = 0.0;
        if (!parse_number(item, v)) throw bad_value(key, "a list of numbers");
        out.push_back(v);
    }
    return out;
}

std::vector<std::size_t> KeyValueConfig::get_sizes(const std::string& key, std::vector<std::size_t> fallback) const {
    if (!has(key)) return fallback;
    std::vector<std::size_t> out;
    for (const auto& item : get_list(key)) {
        std::size_t v = 0;
        if (!parse_number(item, v)) throw bad_value(key, "a list of nonnegative integers");
        out.push_back(v);
    }
    return out;
}

void KeyValueConfig::require_known(const std::set<std::string>& allowed) const {
    for (const auto& [key, value] : values_) {
        if (!allowed.count(key)) {
            throw ConfigError("config line " + std::to_string(lines_.at(key)) + ": unknown key '" + key + "'");
        }
    }
}

}  // namespace fsacf
