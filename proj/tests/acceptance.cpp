// Acceptance suite: one pass/fail line per criterion, exit nonzero when
// any fails. argv[1] is the path to the afc-memsim binary (used by the
// determinism criterion).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "afc/bloch.hpp"
#include "afc/comb.hpp"
#include "afc/fit.hpp"
#include "afc/levels.hpp"
#include "afc/protocol.hpp"
#include "afc/pulse.hpp"
#include "afc/pumping.hpp"
#include "afc/rng.hpp"
#include "afc/scenarios.hpp"
#include "afc/spinline.hpp"
#include "afc/units.hpp"

using namespace afc;
namespace fs = std::filesystem;

namespace {

std::string g_cli_path;
int g_failures = 0;

void run_criterion(int id, const std::string& name,
                   const std::function<std::string()>& body) {
    using clock = std::chrono::steady_clock;
    const auto t0 = clock::now();
    bool pass = true;
    std::string detail;
    try {
        detail = body();
    } catch (const std::exception& e) {
        pass = false;
        detail = std::string("exception: ") + e.what();
    }
    if (detail.rfind("FAIL", 0) == 0) pass = false;
    const double sec =
        std::chrono::duration<double>(clock::now() - t0).count();
    std::printf("[%s] criterion %2d (%5.1f s) %s%s%s\n",
                pass ? "PASS" : "FAIL", id, sec, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!pass) ++g_failures;
}

std::string fail(const std::string& msg) { return "FAIL: " + msg; }

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1.0);
    return v;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

// ------------------------------------------------------------------ 1

std::string afc_constants() {
    const double f_opt = optimal_finesse(4.0);
    const double bare = analytic_efficiency(4.0, f_opt, 0.0);
    const double with_bg = analytic_efficiency(4.0, f_opt, 0.3);
    if (std::abs(bare - 0.32) > 0.003)
        return fail("eta(4, F_opt, 0) = " + fmt(bare));
    if (std::abs(with_bg - 0.237) > 0.003)
        return fail("eta(4, F_opt, 0.3) = " + fmt(with_bg));
    return "eta = " + fmt(bare) + " and " + fmt(with_bg);
}

// ------------------------------------------------------------------ 2

std::string oracle_equivalence() {
    double worst = 0.0;
    for (double d : {0.5, 1.0, 2.0, 4.0, 8.0})
        for (double f : {1.5, 2.0, 3.0, 5.0}) {
            const CombProfile comb =
                build_comb(1e6, d, f, 0.0, 20e6, ToothShape::square, 0.0, 256);
            const double numeric = fourier_efficiency(comb).eta;
            const double closed = analytic_efficiency(d, f, 0.0);
            worst = std::max(worst, std::abs(numeric - closed) / closed);
        }
    if (worst > 0.01)
        return fail("worst Fourier/analytic gap " + fmt(worst));

    for (double d = 0.5; d <= 10.0 + 1e-9; d += 0.5) {
        double best_f = 1.0, best = -1.0;
        for (double f = 1.5; f <= 12.0; f += 0.01) {
            const double eta = analytic_efficiency(d, f, 0.0);
            if (eta > best) {
                best = eta;
                best_f = f;
            }
        }
        if (std::abs(best_f - optimal_finesse(d)) > 0.011)
            return fail("argmax mismatch at d = " + fmt(d));
    }
    return "worst oracle gap " + fmt(worst);
}

// ------------------------------------------------------------------ 3

std::string reabsorption_bound() {
    double sup = 0.0;
    for (double d = 0.1; d <= 50.0 + 1e-9; d += 0.05)
        sup = std::max(sup, analytic_efficiency(d, optimal_finesse(d), 0.0));
    if (sup > 0.54) return fail("bound exceeded: " + fmt(sup));
    if (sup < 0.53) return fail("bound not approached: " + fmt(sup));
    return "sup over d in [0.1, 50] = " + fmt(sup);
}

// ------------------------------------------------------------------ 4

std::string bloch_correctness() {
    const double tol = 1e-10;
    const PulseEnvelope pi_pulse = make_pulse(PulseShape::square, 2e6, 0.25e-6);
    const PulseEnvelope two_pi = make_pulse(PulseShape::square, 2e6, 0.5e-6);
    const BlochState a = evolve_final(BlochState{}, pi_pulse, 0.0, tol);
    const BlochState b = evolve_final(BlochState{}, two_pi, 0.0, tol);
    if (std::abs(a.w - 1.0) > 1e-6) return fail("pi pulse w = " + fmt(a.w));
    if (std::abs(b.w + 1.0) > 1e-6) return fail("2pi pulse w = " + fmt(b.w));

    double worst_freq = 0.0, worst_drift = 0.0;
    for (double om : {0.5e6, 1.0e6, 1.5e6, 2.0e6, 3.0e6})
        for (double det : {0.0, 0.5e6, 1.0e6, 2.0e6, 3.0e6}) {
            const RabiTrace trace = rabi_trace(om, 10e-6, det, 8192, 1e-8);
            const double g = std::sqrt(om * om + det * det);
            const double f = dominant_frequency(trace.t_s, trace.w);
            worst_freq = std::max(worst_freq, std::abs(f - g) / g);

            const BlochTrajectory traj = evolve(
                BlochState{}, make_pulse(PulseShape::square, om, 10e-6), det,
                1e-8);
            worst_drift = std::max(worst_drift, traj.max_norm_drift());
        }
    if (worst_freq > 0.01)
        return fail("generalized Rabi error " + fmt(worst_freq));
    if (worst_drift > 1e-6) return fail("norm drift " + fmt(worst_drift));
    return "freq err " + fmt(worst_freq) + ", drift " + fmt(worst_drift);
}

// ------------------------------------------------------------------ 5

std::string hsh_cross_check() {
    double worst = 0.0;
    std::string where;
    for (double om : {0.6e6, 1.0e6, 1.5e6, 2.0e6})
        for (double gam : {10e6, 20e6, 50e6}) {
            const PulseEnvelope p = make_hsh(om, 5e-6, gam);
            const double bloch = average_transfer(p, gam, 33, 1e-8);
            const double closed = hsh_efficiency_analytic(5e-6, om, gam).eta;
            const double gap = std::abs(bloch - closed);
            if (gap > worst) {
                worst = gap;
                where = "omega " + fmt(om / 1e6) + " MHz, gamma " +
                        fmt(gam / 1e6) + " MHz";
            }
            if (gap > 0.05)
                return fail("gap " + fmt(gap) + " at " + where);
        }

    // efficiency keeps dropping as the chirp bandwidth grows
    for (double om : {0.6e6, 1.0e6, 1.5e6, 2.0e6}) {
        double prev = 2.0;
        for (double gam : {50e6, 75e6, 100e6}) {
            const PulseEnvelope p = make_hsh(om, 5e-6, gam);
            const double eta = average_transfer(p, gam, 33, 1e-8);
            if (eta >= prev)
                return fail("eta_t not decreasing at omega " + fmt(om / 1e6) +
                            " MHz, gamma " + fmt(gam / 1e6) + " MHz");
            prev = eta;
        }
    }
    return "worst |Bloch - closed form| = " + fmt(worst) + " at " + where;
}

// ------------------------------------------------------------------ 6

std::string spin_dephasing() {
    const double gamma = 0.73e6;
    const SpinEnsemble ensemble = SpinEnsemble::gaussian(gamma, 100000, 20200427);

    const double tau = 10e-6;
    const EchoSchedule sched{20e-6, tau, 0.97,
                             std::numeric_limits<double>::infinity()};
    const auto pulses = sched.pulse_times();
    const std::vector<double> dts = linspace(-2e-6, 2e-6, 41);
    std::vector<double> sample_times(dts.size());
    for (std::size_t i = 0; i < dts.size(); ++i)
        sample_times[i] = 2.0 * tau + dts[i];
    const EchoTrace mc = echo_trace(ensemble, pulses, sample_times, sched.pi_eff,
                                    sched.t2s_s);
    double worst = 0.0;
    for (std::size_t i = 0; i < dts.size(); ++i) {
        EchoSchedule probe = sched;
        probe.t_s = sample_times[i];
        worst = std::max(worst,
                         std::abs(mc.intensity[i] - rephase_intensity(probe, gamma)));
    }
    if (worst > 0.03) return fail("MC vs Eq.(1) gap " + fmt(worst));

    const FitResult fit = fit_gaussian_mismatch(dts, mc.intensity);
    if (!fit.converged) return fail("linewidth fit did not converge");
    const double fitted = fit.value("Gamma");
    if (std::abs(fitted - gamma) > 0.04e6)
        return fail("fitted Gamma_MW = " + fmt(fitted / 1e6) + " MHz");

    // perfect rephasing exactly at tau = T_S / 2
    const double t_s = 20e-6;
    const double best =
        rephase_intensity({t_s, t_s / 2.0, 1.0,
                           std::numeric_limits<double>::infinity()}, gamma);
    for (int i = 0; i <= 40; ++i) {
        const double tau_probe = t_s / 2.0 + (i - 20) * 50e-9;
        if (tau_probe <= 0.0 || tau_probe >= t_s || i == 20) continue;
        const double v =
            rephase_intensity({t_s, tau_probe, 1.0,
                               std::numeric_limits<double>::infinity()}, gamma);
        if (v >= best) return fail("rephasing argmax off T_S/2");
    }

    // FID intensity half-point near 0.43 us
    double lo = 0.0, hi = 2e-6;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double amp = fid_amplitude(gamma, mid);
        (amp * amp > 0.5 ? lo : hi) = mid;
    }
    const double t_half = 0.5 * (lo + hi);
    if (std::abs(t_half - 0.43e-6) > 0.03e-6)
        return fail("FID half point " + fmt(t_half * 1e6) + " us");

    return "MC gap " + fmt(worst) + ", Gamma " + fmt(fitted / 1e6) +
           " MHz, FID half " + fmt(t_half * 1e6) + " us";
}

// ------------------------------------------------------------------ 7

std::string fit_round_trips() {
    {
        const std::vector<double> t = linspace(1e-6, 30e-6, 30);
        std::vector<double> y(t.size());
        for (std::size_t i = 0; i < t.size(); ++i)
            y[i] = 0.45 * std::exp(-4.0 * t[i] / 15e-6) +
                   0.55 * std::exp(-4.0 * t[i] / 165e-6);
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] *= 1.0 + 0.015 * normal_draw(77, i);
        const FitResult fit = fit_double_exp(t, y);
        if (!fit.converged) return fail("AFC decay fit did not converge");
        if (std::abs(4.0 * fit.value("T1") - 15e-6) > 0.05 * 15e-6)
            return fail("T2' fast = " + fmt(4.0 * fit.value("T1")));
        if (std::abs(4.0 * fit.value("T2") - 165e-6) > 0.05 * 165e-6)
            return fail("T2' slow = " + fmt(4.0 * fit.value("T2")));
    }
    {
        const std::vector<double> t = linspace(2e-3, 1.5, 48);
        std::vector<double> y(t.size());
        for (std::size_t i = 0; i < t.size(); ++i)
            y[i] = 0.5 * std::exp(-t[i] / 36e-3) +
                   0.5 * std::exp(-t[i] / 390e-3);
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] *= 1.0 + 0.01 * normal_draw(78, i);
        const FitResult fit = fit_double_exp(t, y);
        if (!fit.converged) return fail("hole lifetime fit did not converge");
        if (std::abs(fit.value("T1") - 36e-3) > 0.05 * 36e-3)
            return fail("hole fast = " + fmt(fit.value("T1")));
        if (std::abs(fit.value("T2") - 390e-3) > 0.05 * 390e-3)
            return fail("hole slow = " + fmt(fit.value("T2")));
    }
    {
        const std::vector<double> ts = linspace(100e-6, 1.3e-3, 25);
        std::vector<double> y(ts.size());
        for (std::size_t i = 0; i < ts.size(); ++i)
            y[i] = 0.07 * std::exp(-2.0 * ts[i] / 1.2e-3);
        for (std::size_t i = 0; i < y.size(); ++i)
            y[i] *= 1.0 + 0.02 * normal_draw(79, i);
        const FitResult fit = fit_exp(ts, y);
        if (!fit.converged) return fail("T2s fit did not converge");
        const double t2s = 2.0 * fit.value("T");
        if (t2s < 1.0e-3 || t2s > 1.4e-3)
            return fail("T2s = " + fmt(t2s * 1e3) + " ms");
        return "all round trips within 5%, T2s = " + fmt(t2s * 1e3) + " ms";
    }
}

// ------------------------------------------------------------------ 8

std::string pumping_initialization() {
    const StrengthTable strengths = default_strengths();
    auto classes = make_class_grid(60e6, 0.5e6);

    PumpConfig cleaning;
    cleaning.duration_s = 0.4;
    cleaning.relaxation = default_relaxation();
    for (int line = 1; line <= 4; ++line)
        cleaning.beams.push_back({line, 5000.0, 20e6});
    evolve_populations(classes, cleaning, strengths);

    PumpConfig init = cleaning;
    init.duration_s = 0.3;
    init.beams.clear();
    for (int line = 2; line <= 4; ++line)
        init.beams.push_back({line, 5000.0, 20e6});
    evolve_populations(classes, init, strengths);

    const double pop4 = classes[classes.size() / 2].population[3];
    if (pop4 <= 0.9) return fail("population(|4>g) = " + fmt(pop4));
    for (const auto& c : classes)
        if (std::abs(c.population_sum() - 1.0) > 1e-9)
            return fail("population sum drift at offset " +
                        fmt(c.center_offset_hz));

    // lifetime round trip on the prepared structure (coarse grid)
    auto small = make_class_grid(40e6, 2e6);
    for (auto& c : small) c.population = classes[classes.size() / 2].population;
    const std::vector<double> probes = linspace(2e-3, 1.5, 48);
    const HoleLifetimeTrace trace = hole_lifetime_trace(
        small, default_relaxation(), probes, strengths);
    const FitResult fit = fit_double_exp(trace.t_s, trace.antihole_contrast);
    if (!fit.converged) return fail("lifetime fit did not converge");
    if (std::abs(fit.value("T1") - 36e-3) > 0.05 * 36e-3)
        return fail("lifetime fast = " + fmt(fit.value("T1") * 1e3) + " ms");
    if (std::abs(fit.value("T2") - 390e-3) > 0.05 * 390e-3)
        return fail("lifetime slow = " + fmt(fit.value("T2") * 1e3) + " ms");

    return "population(|4>g) = " + fmt(pop4) + ", lifetimes " +
           fmt(fit.value("T1") * 1e3) + " / " + fmt(fit.value("T2") * 1e3) +
           " ms";
}

// ------------------------------------------------------------------ 9

std::string end_to_end_budget() {
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

    const EfficiencyBudget b = efficiency_budget(p);
    if (b.eta_m < 0.06 || b.eta_m > 0.13)
        return fail("eta_M (Bloch eta_t) = " + fmt(b.eta_m));
    if (b.eta_m_measured_variant < 0.06 || b.eta_m_measured_variant > 0.13)
        return fail("eta_M (measured eta_t) = " +
                    fmt(b.eta_m_measured_variant));
    return "eta_M = " + fmt(b.eta_m) + " (Bloch) / " +
           fmt(b.eta_m_measured_variant) + " (measured), " +
           fmt(b.discrepancy_factor) + "x the measured 3.3%";
}

// ----------------------------------------------------------------- 10

int run_cli(const std::string& args) {
    const std::string cmd = g_cli_path + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string compare_trees(const fs::path& a, const fs::path& b) {
    std::size_t files = 0;
    for (const auto& entry : fs::recursive_directory_iterator(a)) {
        if (!entry.is_regular_file()) continue;
        ++files;
        const fs::path rel = fs::relative(entry.path(), a);
        if (!fs::exists(b / rel)) return "missing " + rel.string();
        if (read_bytes(entry.path()) != read_bytes(b / rel))
            return "differs: " + rel.string();
    }
    if (files == 0) return "no artifacts";
    return "";
}

std::string determinism() {
    if (g_cli_path.empty()) return fail("no CLI path given");
    const fs::path base = fs::temp_directory_path() / "afc_acceptance_det";
    fs::remove_all(base);

    for (const std::string fig : {"fig2b", "sfig3", "fig3d", "fig1c", "sfig4"}) {
        const fs::path a = base / (fig + "_a");
        const fs::path b = base / (fig + "_b");
        const fs::path c = base / (fig + "_c");
        run_cli("--out " + a.string() + " --threads 2 reproduce " + fig);
        run_cli("--out " + b.string() + " --threads 2 reproduce " + fig);
        run_cli("--out " + c.string() + " --threads 1 reproduce " + fig);
        std::string diff = compare_trees(a / fig, b / fig);
        if (!diff.empty())
            return fail(fig + " across runs: " + diff);
        diff = compare_trees(a / fig, c / fig);
        if (!diff.empty())
            return fail(fig + " across thread counts: " + diff);
    }
    return "5 presets byte-identical across runs and thread counts";
}

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli_path = argv[1];

    run_criterion(1, "AFC efficiency constants", afc_constants);
    run_criterion(2, "Fourier oracle equivalence and argmax", oracle_equivalence);
    run_criterion(3, "54% forward-recall bound", reabsorption_bound);
    run_criterion(4, "Bloch correctness", bloch_correctness);
    run_criterion(5, "HSH transfer cross-check", hsh_cross_check);
    run_criterion(6, "spin dephasing and rephasing", spin_dephasing);
    run_criterion(7, "fit round trips", fit_round_trips);
    run_criterion(8, "pumping initialization", pumping_initialization);
    run_criterion(9, "end-to-end efficiency budget", end_to_end_budget);
    run_criterion(10, "reproduce determinism", determinism);

    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
