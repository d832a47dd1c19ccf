#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace fsacf {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/**
 * @brief Flat `key = value` table.
 *
 * Lines starting with `#` are comments, a value may be a bare scalar, a
 * double-quoted string or a bracketed list such as `[100, 250, 500]`.
 * Table headers (`[name]`) are not supported.
 */
class KeyValueConfig {
public:
    static KeyValueConfig parse(std::istream& in);
    static KeyValueConfig parse_file(const std::string& path);

    [[nodiscard]] bool has(const std::string& key) const;
    [[nodiscard]] std::string get_string(const std::string& key, const std::string& fallback) const;
    [[nodiscard]] double get_double(const std::string& key, double fallback) const;
    [[nodiscard]] std::size_t get_size(const std::string& key, std::size_t fallback) const;
    [[nodiscard]] std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    [[nodiscard]] std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) const;
    [[nodiscard]] std::vector<std::size_t> get_sizes(const std::string& key, std::vector<std::size_t> fallback) const;
    /// Items are split on commas; each item is returned unquoted and trimmed.
    [[nodiscard]] std::vector<std::string> get_list(const std::string& key) const;

    /// Throws ConfigError naming the first key that is not in allowed.
    void require_known(const std::set<std::string>& allowed) const;

private:
    std::map<std::string, std::string> values_;
    std::map<std::string, std::size_t> lines_;

    [[nodiscard]] ConfigError bad_value(const std::string& key, const std::string& expected) const;
};

}  // namespace fsacf
