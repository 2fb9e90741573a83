#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "afc/errors.hpp"
#include "afc/protocol.hpp"

using namespace afc;

namespace {

StorageParams paper_params() {
    StorageParams p;
    p.inv_delta_s = 7e-6;
    p.t_s_s = 100e-6;
    p.input_duration_s = 0.2e-6;
    p.input_bandwidth_hz = 10e6;
    p.control_pulse = make_hsh(0.6e6, 5e-6, 10e6);
    p.mw_pulse_duration_s = 10e-6;
    p.mw_chirp_bw_hz = 3e6;
    p.comb = build_comb(1.0 / 7e-6, 4.0, optimal_finesse(4.0), 0.3, 20e6);
    p.comb_decay = CombDecay{15e-6, 165e-6, 0.45};
    p.spin = SpinParams{0.73e6, 1.2e-3, 0.97};
    return p;
}

}  // namespace

TEST_CASE("timeline reproduces the spin-wave sequence timing") {
    const StorageParams p = paper_params();
    const SequenceTimeline tl = build_timeline(p);
    CHECK(tl.t_m_s == doctest::Approx(107e-6));

    const auto& input = tl.event("input");
    const auto& c1 = tl.event("control1");
    const auto& c2 = tl.event("control2");
    const auto& mw1 = tl.event("mw_pi_1");
    const auto& mw2 = tl.event("mw_pi_2");
    const auto& output = tl.event("output");

    CHECK(input.time_s == 0.0);
    CHECK(output.time_s == doctest::Approx(107e-6));
    CHECK(c2.time_s - c1.time_s == doctest::Approx(p.t_s_s));
    // MW pulse separation is exactly T_S / 2 (centre to centre)
    CHECK(mw2.time_s - mw1.time_s == doctest::Approx(p.t_s_s / 2.0));

    // control pulse fits between the input and the echo window
    CHECK(c1.time_s >= input.duration_s);
    CHECK(c1.time_s + c1.duration_s <= p.inv_delta_s);

    CHECK(input.channel == "nu1");
    CHECK(c1.channel == "nu2");
    CHECK(mw1.channel == "nu_mw");
}

TEST_CASE("infeasible schedules raise descriptive errors") {
    StorageParams p = paper_params();
    p.t_s_s = 30e-6;  // too short for the 10 us MW pulses and control
    CHECK_THROWS_AS(build_timeline(p), SchedulingError);

    p = paper_params();
    p.inv_delta_s = 6e-6;
    p.comb = build_comb(1.0 / 6e-6, 4.0, optimal_finesse(4.0), 0.3, 20e6);
    // control (6.25 us) no longer fits before the echo
    CHECK_THROWS_AS(build_timeline(p), SchedulingError);

    p = paper_params();
    p.input_bandwidth_hz = 30e6;  // wider than the comb
    CHECK_THROWS_AS(p.validate(), SchedulingError);

    p = paper_params();
    p.inv_delta_s = 0.5e-6;  // violates 1/Delta >> input duration
    CHECK_THROWS_AS(p.validate(), SchedulingError);
}

TEST_CASE("efficiency budget multiplies its factors exactly") {
    const StorageParams p = paper_params();
    const EfficiencyBudget b = efficiency_budget(p, 0.85);
    const double logsum = std::log(b.eta_afc) + 2.0 * std::log(b.eta_t) +
                          2.0 * std::log(b.eta_mw) + std::log(b.spin_decay) +
                          std::log(b.gaussian_mismatch);
    CHECK(std::abs(std::log(b.eta_m) - logsum) <= 1e-12);
    CHECK(b.gaussian_mismatch == 1.0);
    CHECK(b.eta_mw == doctest::Approx(0.97));
    CHECK(b.spin_decay == doctest::Approx(std::exp(-2.0 * 100e-6 / 1.2e-3)));
}

TEST_CASE("budget reproduces the paper-scale prediction gap") {
    const StorageParams p = paper_params();
    const EfficiencyBudget b = efficiency_budget(p);

    CHECK(b.eta_t == doctest::Approx(0.83).epsilon(0.07));
    CHECK(b.eta_afc == doctest::Approx(0.127).epsilon(0.08));

    // predicted efficiency lands 2-4x above the measured 3.3%
    CHECK(b.eta_m >= 0.06);
    CHECK(b.eta_m <= 0.13);
    CHECK(b.eta_m_measured_variant >= 0.06);
    CHECK(b.eta_m_measured_variant <= 0.13);
    CHECK(b.discrepancy_factor >= 1.8);
    CHECK(b.discrepancy_factor <= 4.0);
    CHECK(b.discrepancy_factor_measured >= 1.8);
    CHECK(b.discrepancy_factor_measured <= 4.0);
}

TEST_CASE("zero transfer means zero recall") {
    StorageParams p = paper_params();
    p.control_pulse = make_hsh(0.0, 5e-6, 10e6);
    const EfficiencyBudget b = efficiency_budget(p);
    CHECK(b.eta_t == 0.0);
    CHECK(b.eta_m == 0.0);
}

TEST_CASE("eta_m decreases strictly with the spin storage time") {
    const StorageParams base = paper_params();
    double prev = 1.0;
    for (double ts = 100e-6; ts <= 1.0e-3; ts += 150e-6) {
        StorageParams p = base;
        p.t_s_s = ts;
        const double eta = efficiency_budget(p, 0.85).eta_m;
        CHECK(eta < prev);
        prev = eta;
    }
}

TEST_CASE("storage trace: suppressed echo and output peak ratio") {
    const StorageParams p = paper_params();
    std::vector<double> grid(8001);
    for (std::size_t i = 0; i < grid.size(); ++i)
        grid[i] = 120e-6 * static_cast<double>(i) / (grid.size() - 1.0);
    const StorageTrace trace = simulate_storage(p, grid);
    const EfficiencyBudget b = efficiency_budget(p);

    const double in_peak = trace.peak_near(p.input_duration_s / 2.0, 2e-6);
    const double out_peak = trace.peak_near(p.t_m_s(), 2e-6);
    CHECK(in_peak == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(out_peak / in_peak == doctest::Approx(b.eta_m).epsilon(0.02));

    // residual two-level echo is suppressed by (1 - eta_t)^2
    const double echo_peak = trace.peak_near(p.inv_delta_s, 2e-6);
    const double expect = b.eta_afc * (1.0 - b.eta_t) * (1.0 - b.eta_t);
    CHECK(echo_peak == doctest::Approx(expect).epsilon(0.05));
}

TEST_CASE("without control pulses the two-level echo carries eta_afc") {
    StorageParams p = paper_params();
    p.inv_delta_s = 5e-6;
    p.comb = build_comb(1.0 / 5e-6, 4.0, optimal_finesse(4.0), 0.3, 20e6);
    p.control_pulse = make_hsh(0.0, 5e-6, 10e6);  // no drive
    p.t_s_s = 100e-6;

    std::vector<double> grid(8001);
    for (std::size_t i = 0; i < grid.size(); ++i)
        grid[i] = 120e-6 * static_cast<double>(i) / (grid.size() - 1.0);
    const StorageTrace trace = simulate_storage(p, grid);
    const double echo_peak = trace.peak_near(p.inv_delta_s, 2e-6);

    // Fig 2a working point: eta_AFC ~ 15% at 1/Delta = 5 us
    CHECK(echo_peak == doctest::Approx(0.15).epsilon(0.15));
    CHECK(echo_peak ==
          doctest::Approx(efficiency_budget(p, 0.0).eta_afc).epsilon(0.02));
}
