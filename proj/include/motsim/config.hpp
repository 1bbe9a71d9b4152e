#ifndef MOTSIM_CONFIG_HPP_
#define MOTSIM_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace motsim {

// Flat "key = value" text configuration, '#' starts a comment.
// Serialization is canonical (sorted keys, %.17g doubles) so that a
// config hash is stable across round trips.
class KeyValueConfig {
public:
    KeyValueConfig() = default;

    static KeyValueConfig parse_file(const std::string& path);
    static KeyValueConfig parse_string(const std::string& text);

    bool has(const std::string& key) const;

    std::string get(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    long get_int(const std::string& key, long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    // Whitespace-separated list of numbers, e.g. "bias_g = 0 0 1".
    std::vector<double> get_vector(const std::string& key) const;

    void set(const std::string& key, const std::string& value);
    void set_double(const std::string& key, double value);
    void set_int(const std::string& key, long value);
    void set_bool(const std::string& key, bool value);

    std::string serialize() const;
    void write_file(const std::string& path) const;

    const std::map<std::string, std::string>& entries() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

// Canonical shortest-round-trip formatting used for all numeric output.
std::string format_double(double v);

// FNV-1a, used as the config hash recorded in sweep output.
std::uint64_t fnv1a_hash(const std::string& text);

}  // namespace motsim

#endif
