#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "afc/config.hpp"

// Scenario orchestration shared by the CLI and the tests: runs a parsed
// config, writes the artifact files plus a manifest, and hosts the
// figure-reproduction presets with their pass/fail comparison tables.
namespace afc {

struct RunOptions {
    std::string out_dir = "afc_out";
    std::optional<std::uint64_t> seed;
    std::optional<double> tolerance;
    std::optional<int> threads;
};

// Runs one scenario; returns the list of artifact files written
// (absolute paths). Throws ConfigError / module errors on failure.
std::vector<std::string> run_scenario(ScenarioConfig cfg,
                                      const RunOptions& options);

struct CheckRow {
    std::string name;
    double paper_value = 0.0;
    double simulated = 0.0;
    double tolerance = 0.0;  // absolute
    bool pass = false;
};

struct ReproduceResult {
    std::string figure;
    std::vector<CheckRow> rows;
    bool all_pass = false;
    std::vector<std::string> artifacts;
};

// Known ids: fig1c, fig2b, fig3d, sfig3, sfig4.
ReproduceResult reproduce(const std::string& figure_id,
                          const RunOptions& options);

std::vector<std::string> known_figures();

// Bundled preset config text for a figure id (also what `reproduce` runs).
std::string preset_config_text(const std::string& figure_id);

}  // namespace afc
