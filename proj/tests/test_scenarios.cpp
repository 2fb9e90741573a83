#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "afc/csv.hpp"
#include "afc/scenarios.hpp"

using namespace afc;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("afc_scn_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

json read_json(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    json j;
    in >> j;
    return j;
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("comb scenario emits its artifacts and a sane decay fit") {
    const fs::path dir = fresh_dir("comb");
    RunOptions opt;
    opt.out_dir = dir.string();

    ScenarioConfig cfg = ScenarioConfig::parse_string(R"(scenario = comb
seed = 7

[comb]
delta_khz = 142.857
d_peak = 4
d0 = 0.3

[sweep]
delay_min_us = 1
delay_max_us = 30
points = 30
noise = 0.015
)");
    run_scenario(std::move(cfg), opt);

    CHECK(fs::exists(dir / "comb_profile.csv"));
    CHECK(fs::exists(dir / "efficiency_vs_delay.csv"));
    CHECK(fs::exists(dir / "manifest.json"));

    const json fit = read_json(dir / "decay_fit.json");
    REQUIRE(fit["converged"].get<bool>());
    CHECK(fit["t2_fast_s"].get<double>() ==
          doctest::Approx(15e-6).epsilon(0.05));
    CHECK(fit["t2_slow_s"].get<double>() ==
          doctest::Approx(165e-6).epsilon(0.05));
    CHECK(fit["prefactor"].get<double>() == doctest::Approx(0.238).epsilon(0.1));

    const json check = read_json(dir / "fourier_vs_analytic.json");
    CHECK(check["relative_gap"].get<double>() < 0.01);
}

TEST_CASE("identical config and seed give byte-identical outputs") {
    ScenarioConfig::parse_string(preset_config_text("fig2b"));  // id known

    const std::string config = R"(scenario = spin
seed = 31

[spin]
gamma_mw_mhz = 0.73
n_ions = 20000
t_s_us = 20
tau_us = 10

[scan]
points = 21
)";
    const fs::path a = fresh_dir("det_a");
    const fs::path b = fresh_dir("det_b");
    RunOptions opt_a;
    opt_a.out_dir = a.string();
    opt_a.threads = 2;
    RunOptions opt_b;
    opt_b.out_dir = b.string();
    opt_b.threads = 1;  // different worker count, same bytes

    run_scenario(ScenarioConfig::parse_string(config), opt_a);
    run_scenario(ScenarioConfig::parse_string(config), opt_b);

    for (const char* name :
         {"fid.csv", "echo_trace.csv", "dts_scan.csv", "gamma_fit.json"}) {
        CHECK(read_bytes(a / name) == read_bytes(b / name));
    }
}

TEST_CASE("spin scenario recovers the linewidth from its own scan") {
    const fs::path dir = fresh_dir("spin");
    RunOptions opt;
    opt.out_dir = dir.string();
    ScenarioConfig cfg = ScenarioConfig::parse_string(R"(scenario = spin
seed = 5

[spin]
gamma_mw_mhz = 0.73
n_ions = 50000
t_s_us = 20
tau_us = 10
)");
    run_scenario(std::move(cfg), opt);
    const json fit = read_json(dir / "gamma_fit.json");
    REQUIRE(fit["converged"].get<bool>());
    CHECK(fit["gamma_mw_hz"].get<double>() ==
          doctest::Approx(0.73e6).epsilon(0.06));
}

TEST_CASE("fit scenario round-trips a generated csv") {
    const fs::path dir = fresh_dir("fit");
    Table data;
    std::vector<double> t, y;
    for (int i = 0; i < 24; ++i) {
        t.push_back(i * 20e-6);
        y.push_back(0.9 * std::exp(-t.back() / 165e-6));
    }
    data.add_column("time_s", t);
    data.add_column("intensity", y);
    const fs::path csv = dir / "input.csv";
    data.save(csv.string());

    RunOptions opt;
    opt.out_dir = dir.string();
    ScenarioConfig cfg = ScenarioConfig::parse_string(
        "scenario = fit\n[fit]\nmodel = exp\ninput = " + csv.string() + "\n");
    run_scenario(std::move(cfg), opt);

    const json fit = read_json(dir / "fit.json");
    REQUIRE(fit["converged"].get<bool>());
    CHECK(fit["params"]["T"]["value"].get<double>() ==
          doctest::Approx(165e-6).epsilon(1e-3));
}

TEST_CASE("unknown scenario and unknown keys are rejected") {
    RunOptions opt;
    opt.out_dir = fresh_dir("bad").string();
    CHECK_THROWS(run_scenario(
        ScenarioConfig::parse_string("scenario = nonsense\n"), opt));
    CHECK_THROWS(run_scenario(ScenarioConfig::parse_string(R"(scenario = comb
[comb]
delta_khz = 200
not_a_key = 1
)"),
                              opt));
}

TEST_CASE("preset configs parse and the id list is stable") {
    for (const auto& id : known_figures()) {
        const std::string text = preset_config_text(id);
        CHECK_NOTHROW(ScenarioConfig::parse_string(text));
    }
    CHECK_THROWS_AS(preset_config_text("fig9z"), std::invalid_argument);
}
