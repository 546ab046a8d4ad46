#include "vanetsim/textconfig.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

#include "vanetsim/errors.hpp"

namespace vanet {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
    // '#' starts a comment unless inside quotes
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        else if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

}  // namespace

bool ConfigSection::has(const std::string& key) const {
    return std::any_of(entries.begin(), entries.end(),
                       [&](const auto& kv) { return kv.first == key; });
}

const std::string& ConfigSection::get(const std::string& key) const {
    for (const auto& kv : entries)
        if (kv.first == key) return kv.second;
    throw ParseError("missing key '" + key + "' in section " + label());
}

std::string ConfigSection::get_or(const std::string& key, const std::string& fallback) const {
    for (const auto& kv : entries)
        if (kv.first == key) return kv.second;
    return fallback;
}

double ConfigSection::get_double(const std::string& key) const {
    const std::string& v = get(key);
    try {
        size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ParseError("key '" + key + "' in section " + label() +
                         " is not a number: '" + v + "'");
    }
}

double ConfigSection::get_double_or(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

long long ConfigSection::get_int(const std::string& key) const {
    const std::string& v = get(key);
    long long out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw ParseError("key '" + key + "' in section " + label() +
                         " is not an integer: '" + v + "'");
    return out;
}

long long ConfigSection::get_int_or(const std::string& key, long long fallback) const {
    return has(key) ? get_int(key) : fallback;
}

std::string ConfigSection::label() const {
    if (name.empty()) return "[" + kind + "]";
    return "[" + kind + " \"" + name + "\"]";
}

std::vector<const ConfigSection*> ConfigFile::all_of(const std::string& kind) const {
    std::vector<const ConfigSection*> out;
    for (const auto& s : sections)
        if (s.kind == kind) out.push_back(&s);
    return out;
}

const ConfigSection* ConfigFile::find(const std::string& kind) const {
    for (const auto& s : sections)
        if (s.kind == kind) return &s;
    return nullptr;
}

ConfigFile parse_config(const std::string& text) {
    ConfigFile file;
    ConfigSection* current = nullptr;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("line " + std::to_string(lineno) + ": unterminated section header");
            std::string inner = trim(line.substr(1, line.size() - 2));
            ConfigSection sec;
            sec.line = lineno;
            size_t sp = inner.find_first_of(" \t");
            if (sp == std::string::npos) {
                sec.kind = inner;
            } else {
                sec.kind = inner.substr(0, sp);
                std::string rest = trim(inner.substr(sp));
                if (rest.size() < 2 || rest.front() != '"' || rest.back() != '"')
                    throw ParseError("line " + std::to_string(lineno) +
                                     ": section name must be double-quoted");
                sec.name = rest.substr(1, rest.size() - 2);
            }
            if (sec.kind.empty())
                throw ParseError("line " + std::to_string(lineno) + ": empty section kind");
            file.sections.push_back(std::move(sec));
            current = &file.sections.back();
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected 'key = value'");
        if (current == nullptr)
            throw ParseError("line " + std::to_string(lineno) + ": key outside any section");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ParseError("line " + std::to_string(lineno) + ": empty key");
        if (current->has(key))
            throw ParseError("line " + std::to_string(lineno) + ": duplicate key '" + key +
                             "' in section " + current->label());
        current->entries.emplace_back(std::move(key), std::move(value));
    }
    return file;
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string tok;
    for (char c : value) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            if (!tok.empty()) out.push_back(std::move(tok)), tok.clear();
        } else {
            tok.push_back(c);
        }
    }
    if (!tok.empty()) out.push_back(std::move(tok));
    return out;
}

}  // namespace vanet
