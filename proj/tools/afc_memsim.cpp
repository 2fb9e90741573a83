// afc-memsim: scenario runner, figure-reproduction presets and curve
// fitting for the AFC spin-wave memory model. Outputs are files (CSV for
// series, JSON for tables); see README for the scenario config format.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "afc/config.hpp"
#include "afc/errors.hpp"
#include "afc/scenarios.hpp"

namespace {

std::string default_out_dir() {
    if (const char* env = std::getenv("AFC_MEMSIM_OUT")) return env;
    return "afc_out";
}

void print_rows(const afc::ReproduceResult& result) {
    std::printf("figure %s\n", result.figure.c_str());
    for (const auto& r : result.rows)
        std::printf("  [%s] %-58s paper=%-12.6g sim=%-12.6g tol=%.3g\n",
                    r.pass ? "PASS" : "FAIL", r.name.c_str(), r.paper_value,
                    r.simulated, r.tolerance);
    std::printf("%s: %s\n", result.figure.c_str(),
                result.all_pass ? "all checks passed" : "CHECKS FAILED");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AFC spin-wave optical memory simulator"};
    app.require_subcommand(1);

    afc::RunOptions options;
    options.out_dir = default_out_dir();
    std::uint64_t seed = 0;
    double tolerance = 0.0;
    int threads = 0;
    app.add_option("--out", options.out_dir, "output directory")
        ->capture_default_str();
    app.add_option("--seed", seed, "override the config seed");
    app.add_option("--tolerance", tolerance, "override the ODE tolerance");
    app.add_option("--threads", threads, "worker thread count (0 = default)");

    std::string config_path;
    auto* run = app.add_subcommand("run", "run a scenario config");
    run->add_option("config", config_path, "scenario config file")
        ->required()
        ->check(CLI::ExistingFile);

    std::string figure_id;
    auto* rep = app.add_subcommand(
        "reproduce", "run a bundled preset and compare against paper values");
    rep->add_option("figure", figure_id, "fig1c|fig2b|fig3d|sfig3|sfig4")
        ->required();

    std::string fit_model, fit_csv;
    auto* fit = app.add_subcommand("fit", "fit a model to a two-column CSV");
    fit->add_option("model", fit_model, "exp|dexp|gauss")->required();
    fit->add_option("csv", fit_csv, "input CSV (x,y[,sigma])")
        ->required()
        ->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    if (app.count("--seed")) options.seed = seed;
    if (app.count("--tolerance")) options.tolerance = tolerance;
    if (app.count("--threads")) options.threads = threads;

    try {
        if (run->parsed()) {
            auto cfg = afc::ScenarioConfig::parse_file(config_path);
            const auto artifacts = afc::run_scenario(std::move(cfg), options);
            for (const auto& a : artifacts) std::printf("wrote %s\n", a.c_str());
            return 0;
        }
        if (rep->parsed()) {
            const auto result = afc::reproduce(figure_id, options);
            print_rows(result);
            return result.all_pass ? 0 : 1;
        }
        if (fit->parsed()) {
            const std::string text = "scenario = fit\n[fit]\nmodel = " +
                                     fit_model + "\ninput = " + fit_csv + "\n";
            auto cfg = afc::ScenarioConfig::parse_string(text, "<fit>");
            const auto artifacts = afc::run_scenario(std::move(cfg), options);
            for (const auto& a : artifacts) std::printf("wrote %s\n", a.c_str());
            return 0;
        }
    } catch (const afc::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 2;
}
