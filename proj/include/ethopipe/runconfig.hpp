#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace ethopipe {

/// Line-oriented `key = value` run configuration with `#` comments.
/// Keys are validated against a fixed schema; unknown keys are rejected
/// with the offending line number. Explicit CLI flags override config values.
class RunConfig {
public:
    RunConfig() = default;

    static RunConfig parse(const std::string& text);
    static RunConfig load(const std::string& path);

    bool has(const std::string& key) const { return values_.count(key) != 0; }
    int get_int(const std::string& key, int fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;

private:
    std::map<std::string, std::string> values_;
};

}  // namespace ethopipe
