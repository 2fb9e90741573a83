#include "afc/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "afc/csv.hpp"
#include "afc/errors.hpp"

namespace afc {
namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_number(const std::string& value, const std::string& where) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw ConfigError(where + ": not a number: '" + value + "'");
    }
    if (pos != value.size())
        throw ConfigError(where + ": trailing junk in number: '" + value + "'");
    return v;
}

}  // namespace

ScenarioConfig ScenarioConfig::parse_string(const std::string& text,
                                            const std::string& origin) {
    ScenarioConfig cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": empty key or value");
        const std::string full = section.empty() ? key : section + "." + key;
        if (cfg.entries_.count(full))
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": duplicate key '" + full + "'");
        cfg.entries_[full] = Entry{value, lineno, false};
    }
    if (!cfg.entries_.count("scenario"))
        throw ConfigError(origin + ": missing top-level 'scenario' key");
    return cfg;
}

ScenarioConfig ScenarioConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
}

std::optional<const ScenarioConfig::Entry*> ScenarioConfig::find(
    const std::string& section, const std::string& name) const {
    const std::string full = section.empty() ? name : section + "." + name;
    const auto it = entries_.find(full);
    if (it == entries_.end()) return std::nullopt;
    it->second.consumed = true;
    return &it->second;
}

const ScenarioConfig::Entry* ScenarioConfig::find_with_suffix(
    const std::string& section, const std::string& name,
    const std::vector<std::string>& suffixes, double* scale) const {
    static const std::map<std::string, double> factors = {
        {"_hz", 1.0},   {"_khz", 1e3},  {"_mhz", 1e6}, {"_ghz", 1e9},
        {"_s", 1.0},    {"_ms", 1e-3},  {"_us", 1e-6}, {"_ns", 1e-9}};
    const Entry* found = nullptr;
    for (const auto& suf : suffixes) {
        const auto e = find(section, name + suf);
        if (!e) continue;
        if (found)
            throw ConfigError(origin_ + ": key '" + section + "." + name +
                              "' given with more than one unit suffix");
        found = *e;
        *scale = factors.at(suf);
    }
    return found;
}

std::string ScenarioConfig::scenario() const {
    const auto e = find("", "scenario");
    return (*e)->value;
}

std::uint64_t ScenarioConfig::seed() const {
    const auto e = find("", "seed");
    if (!e) return 12345;
    return static_cast<std::uint64_t>(
        std::stoull((*e)->value));
}

double ScenarioConfig::frequency_hz(const std::string& section,
                                    const std::string& name) {
    double scale = 1.0;
    const Entry* e =
        find_with_suffix(section, name, {"_hz", "_khz", "_mhz", "_ghz"}, &scale);
    if (!e)
        throw ConfigError(origin_ + ": missing frequency key '" + section +
                          "." + name + "_hz' (or _khz/_mhz/_ghz)");
    const double v =
        parse_number(e->value, origin_ + ":" + std::to_string(e->line)) * scale;
    note_resolved(section + "." + name + "_hz", format_double(v));
    return v;
}

double ScenarioConfig::frequency_hz(const std::string& section,
                                    const std::string& name,
                                    double fallback_hz) {
    double scale = 1.0;
    const Entry* e =
        find_with_suffix(section, name, {"_hz", "_khz", "_mhz", "_ghz"}, &scale);
    const double v = e ? parse_number(e->value, origin_ + ":" +
                                                    std::to_string(e->line)) *
                             scale
                       : fallback_hz;
    note_resolved(section + "." + name + "_hz", format_double(v));
    return v;
}

double ScenarioConfig::time_s(const std::string& section,
                              const std::string& name) {
    double scale = 1.0;
    const Entry* e =
        find_with_suffix(section, name, {"_s", "_ms", "_us", "_ns"}, &scale);
    if (!e)
        throw ConfigError(origin_ + ": missing time key '" + section + "." +
                          name + "_s' (or _ms/_us/_ns)");
    const double v =
        parse_number(e->value, origin_ + ":" + std::to_string(e->line)) * scale;
    note_resolved(section + "." + name + "_s", format_double(v));
    return v;
}

double ScenarioConfig::time_s(const std::string& section,
                              const std::string& name, double fallback_s) {
    double scale = 1.0;
    const Entry* e =
        find_with_suffix(section, name, {"_s", "_ms", "_us", "_ns"}, &scale);
    const double v = e ? parse_number(e->value, origin_ + ":" +
                                                    std::to_string(e->line)) *
                             scale
                       : fallback_s;
    note_resolved(section + "." + name + "_s", format_double(v));
    return v;
}

double ScenarioConfig::number(const std::string& section,
                              const std::string& name) {
    const auto e = find(section, name);
    if (!e)
        throw ConfigError(origin_ + ": missing key '" + section + "." + name +
                          "'");
    const double v =
        parse_number((*e)->value, origin_ + ":" + std::to_string((*e)->line));
    note_resolved(section + "." + name, format_double(v));
    return v;
}

double ScenarioConfig::number(const std::string& section,
                              const std::string& name, double fallback) {
    const auto e = find(section, name);
    const double v =
        e ? parse_number((*e)->value, origin_ + ":" + std::to_string((*e)->line))
          : fallback;
    note_resolved(section + "." + name, format_double(v));
    return v;
}

long ScenarioConfig::integer(const std::string& section,
                             const std::string& name, long fallback) {
    const double v = number(section, name, static_cast<double>(fallback));
    const long n = static_cast<long>(v);
    if (static_cast<double>(n) != v)
        throw ConfigError(origin_ + ": key '" + section + "." + name +
                          "' must be an integer");
    return n;
}

std::string ScenarioConfig::word(const std::string& section,
                                 const std::string& name,
                                 const std::string& fallback) {
    const auto e = find(section, name);
    const std::string v = e ? (*e)->value : fallback;
    note_resolved(section + "." + name, v);
    return v;
}

bool ScenarioConfig::flag(const std::string& section, const std::string& name,
                          bool fallback) {
    const auto e = find(section, name);
    if (!e) {
        note_resolved(section + "." + name, fallback ? "true" : "false");
        return fallback;
    }
    const std::string& v = (*e)->value;
    if (v != "true" && v != "false")
        throw ConfigError(origin_ + ":" + std::to_string((*e)->line) +
                          ": flag '" + name + "' must be true or false");
    note_resolved(section + "." + name, v);
    return v == "true";
}

std::vector<double> ScenarioConfig::number_list(const std::string& section,
                                                const std::string& name) {
    const auto e = find(section, name);
    if (!e)
        throw ConfigError(origin_ + ": missing key '" + section + "." + name +
                          "'");
    std::vector<double> out;
    std::istringstream in((*e)->value);
    std::string tok;
    while (in >> tok)
        out.push_back(
            parse_number(tok, origin_ + ":" + std::to_string((*e)->line)));
    if (out.empty())
        throw ConfigError(origin_ + ": empty list for '" + name + "'");
    std::string echo;
    for (double v : out) echo += (echo.empty() ? "" : " ") + format_double(v);
    note_resolved(section + "." + name, echo);
    return out;
}

bool ScenarioConfig::has(const std::string& section,
                         const std::string& name) const {
    const std::string full = section.empty() ? name : section + "." + name;
    return entries_.count(full) > 0;
}

bool ScenarioConfig::has_section(const std::string& section) const {
    const std::string prefix = section + ".";
    const auto it = entries_.lower_bound(prefix);
    return it != entries_.end() && it->first.rfind(prefix, 0) == 0;
}

void ScenarioConfig::reject_unknown_keys() const {
    std::string bad;
    for (const auto& [key, entry] : entries_) {
        if (entry.consumed) continue;
        if (!bad.empty()) bad += ", ";
        bad += "'" + key + "' (line " + std::to_string(entry.line) + ")";
    }
    if (!bad.empty())
        throw ConfigError(origin_ + ": unknown keys: " + bad);
}

}  // namespace afc
