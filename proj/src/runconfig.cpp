#include "ethopipe/runconfig.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include "ethopipe/errors.hpp"

namespace ethopipe {

namespace {

enum class KeyType { integer, real, boolean, u64, text };

struct KeySpec {
    const char* key;
    KeyType type;
};

// Defaults live with the owning modules; the schema only fixes names/types.
constexpr std::array<KeySpec, 14> kSchema{{
    {"seed", KeyType::u64},
    {"workers", KeyType::integer},
    {"multiplier", KeyType::integer},
    {"window", KeyType::integer},
    {"stride", KeyType::integer},
    {"background", KeyType::boolean},
    {"theta_on", KeyType::real},
    {"theta_off", KeyType::real},
    {"min_dur_s", KeyType::real},
    {"iou_min", KeyType::real},
    {"eta", KeyType::real},
    {"iterations", KeyType::integer},
    {"lambda", KeyType::real},
    {"category", KeyType::text},
}};

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

void check_value(const KeySpec& spec, const std::string& value, int line_no) {
    const auto fail = [&](const char* what) {
        throw ValidationError("config line " + std::to_string(line_no) + ": key '" + spec.key +
                              "' needs " + what + " value, got '" + value + "'");
    };
    try {
        std::size_t pos = 0;
        switch (spec.type) {
            case KeyType::integer:
                (void)std::stoi(value, &pos);
                if (pos != value.size()) fail("an integer");
                break;
            case KeyType::real:
                (void)std::stod(value, &pos);
                if (pos != value.size()) fail("a number");
                break;
            case KeyType::u64:
                (void)std::stoull(value, &pos);
                if (pos != value.size()) fail("an unsigned integer");
                break;
            case KeyType::boolean:
                if (value != "true" && value != "false") fail("true/false");
                break;
            case KeyType::text:
                break;
        }
    } catch (const ValidationError&) {
        throw;
    } catch (const std::exception&) {
        fail("a parseable");
    }
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        const KeySpec* spec = nullptr;
        for (const auto& s : kSchema)
            if (key == s.key) spec = &s;
        if (!spec)
            throw ValidationError("config line " + std::to_string(line_no) + ": unknown key '" +
                                  key + "'");
        check_value(*spec, value, line_no);
        if (!cfg.values_.emplace(key, value).second)
            throw ValidationError("config line " + std::to_string(line_no) + ": duplicate key '" +
                                  key + "'");
    }
    return cfg;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

int RunConfig::get_int(const std::string& key, int fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : std::stoi(it->second);
}

double RunConfig::get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : std::stod(it->second);
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second == "true";
}

std::uint64_t RunConfig::get_u64(const std::string& key, std::uint64_t fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : std::stoull(it->second);
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

}  // namespace ethopipe
