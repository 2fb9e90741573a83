#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

// Scenario configs: INI-style sections of `key = value` lines. Keys for
// dimensioned quantities carry a unit suffix (_hz/_khz/_mhz/_ghz,
// _s/_ms/_us/_ns) and are converted to SI on read. Unknown keys are
// rejected after the scenario has consumed what it understands, and every
// consumed key lands in the resolved-manifest map.
namespace afc {

class ScenarioConfig {
  public:
    static ScenarioConfig parse_file(const std::string& path);
    static ScenarioConfig parse_string(const std::string& text,
                                       const std::string& origin = "<config>");

    // top-level keys
    std::string scenario() const;
    std::uint64_t seed() const;

    // typed accessors; `section.name` addressing. Frequency and time
    // lookups accept any of the unit suffixes on the stored key.
    double frequency_hz(const std::string& section, const std::string& name);
    double frequency_hz(const std::string& section, const std::string& name,
                        double fallback_hz);
    double time_s(const std::string& section, const std::string& name);
    double time_s(const std::string& section, const std::string& name,
                  double fallback_s);
    double number(const std::string& section, const std::string& name);
    double number(const std::string& section, const std::string& name,
                  double fallback);
    long integer(const std::string& section, const std::string& name,
                 long fallback);
    std::string word(const std::string& section, const std::string& name,
                     const std::string& fallback);
    bool flag(const std::string& section, const std::string& name,
              bool fallback);
    std::vector<double> number_list(const std::string& section,
                                    const std::string& name);
    bool has(const std::string& section, const std::string& name) const;
    bool has_section(const std::string& section) const;

    // throws ConfigError naming every unconsumed key with its line number
    void reject_unknown_keys() const;

    // resolved values (SI units) of everything consumed, for the manifest
    const std::map<std::string, std::string>& resolved() const {
        return resolved_;
    }
    void note_resolved(const std::string& key, const std::string& value) {
        resolved_[key] = value;
    }

  private:
    struct Entry {
        std::string value;
        int line = 0;
        mutable bool consumed = false;
    };

    std::optional<const Entry*> find(const std::string& section,
                                     const std::string& name) const;
    const Entry* find_with_suffix(const std::string& section,
                                  const std::string& name,
                                  const std::vector<std::string>& suffixes,
                                  double* scale) const;

    std::string origin_;
    std::map<std::string, Entry> entries_;  // "section.key" -> entry
    std::map<std::string, std::string> resolved_;
};

}  // namespace afc
