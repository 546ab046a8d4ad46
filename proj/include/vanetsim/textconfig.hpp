#pragma once

#include <optional>
#include <string>
#include <vector>

namespace vanet {

// Sectioned key-value text used by the network files, scenario configs,
// labels sidecars and bundle manifests:
//
//   # comment
//   [kind]            plain section
//   [kind "name"]     named section
//   key = value
//
// Sections and keys keep file order. Duplicate keys within a section are
// rejected at parse time.
struct ConfigSection {
    std::string kind;
    std::string name;  // empty for plain sections
    int line = 0;      // 1-based line of the section header
    std::vector<std::pair<std::string, std::string>> entries;

    bool has(const std::string& key) const;
    // Missing keys raise ParseError naming section and key.
    const std::string& get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
    long long get_int(const std::string& key) const;
    long long get_int_or(const std::string& key, long long fallback) const;
    std::string label() const;  // e.g. `vehicle "veh_A"` for error messages
};

struct ConfigFile {
    std::vector<ConfigSection> sections;

    std::vector<const ConfigSection*> all_of(const std::string& kind) const;
    const ConfigSection* find(const std::string& kind) const;  // first match or nullptr
};

ConfigFile parse_config(const std::string& text);

// Splits on commas and/or whitespace; empty tokens dropped.
std::vector<std::string> split_list(const std::string& value);

}  // namespace vanet
