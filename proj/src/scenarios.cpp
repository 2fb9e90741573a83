#include "afc/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>
#ifdef _OPENMP
#include <omp.h>
#endif

#include "afc/bloch.hpp"
#include "afc/comb.hpp"
#include "afc/csv.hpp"
#include "afc/errors.hpp"
#include "afc/fit.hpp"
#include "afc/levels.hpp"
#include "afc/protocol.hpp"
#include "afc/pulse.hpp"
#include "afc/pumping.hpp"
#include "afc/rng.hpp"
#include "afc/spinline.hpp"
#include "afc/units.hpp"

namespace afc {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Context {
    fs::path dir;
    std::uint64_t seed = 0;
    double tol = 1e-8;
    std::vector<std::string> artifacts;

    std::string write_table(const std::string& name, const Table& table) {
        const fs::path p = dir / name;
        table.save(p.string());
        artifacts.push_back(p.string());
        return p.string();
    }

    std::string write_json(const std::string& name, const json& j) {
        const fs::path p = dir / name;
        std::ofstream out(p);
        if (!out) throw std::runtime_error("cannot write " + p.string());
        out << j.dump(2) << "\n";
        artifacts.push_back(p.string());
        return p.string();
    }

    std::string write_text(const std::string& name, const std::string& text) {
        const fs::path p = dir / name;
        std::ofstream out(p);
        if (!out) throw std::runtime_error("cannot write " + p.string());
        out << text;
        artifacts.push_back(p.string());
        return p.string();
    }
};

std::vector<double> linspace(double lo, double hi, long n) {
    std::vector<double> v(n);
    for (long i = 0; i < n; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i) /
                        static_cast<double>(n - 1);
    return v;
}

std::vector<double> logspace(double lo, double hi, long n) {
    std::vector<double> v(n);
    const double la = std::log(lo), lb = std::log(hi);
    for (long i = 0; i < n; ++i)
        v[i] = std::exp(la + (lb - la) * static_cast<double>(i) /
                                 static_cast<double>(n - 1));
    return v;
}

// multiplicative Gaussian noise, deterministic in (seed, salt, index)
void add_relative_noise(std::vector<double>& y, double level,
                        std::uint64_t seed, std::uint64_t salt) {
    if (level <= 0.0) return;
    for (std::size_t i = 0; i < y.size(); ++i)
        y[i] *= 1.0 + level * normal_draw(seed ^ salt, i);
}

json fit_to_json(const FitResult& fit) {
    json j;
    j["converged"] = fit.converged;
    j["iterations"] = fit.iterations;
    j["residual_norm"] = fit.residual_norm;
    j["identifiability_warning"] = fit.identifiability_warning;
    if (!fit.message.empty()) j["message"] = fit.message;
    json params = json::object();
    for (const auto& p : fit.params) {
        params[p.name] = {{"value", p.value}, {"sigma", p.sigma}};
    }
    j["params"] = params;
    return j;
}

double finesse_from_config(ScenarioConfig& cfg, const std::string& section,
                           double d_peak) {
    const std::string word = cfg.word(section, "finesse", "optimal");
    if (word == "optimal") return optimal_finesse(d_peak);
    try {
        return std::stod(word);
    } catch (const std::exception&) {
        throw ConfigError("finesse must be a number or 'optimal', got '" +
                          word + "'");
    }
}

// ---------------------------------------------------------------- comb

void run_comb(ScenarioConfig& cfg, Context& ctx) {
    const double delta = cfg.frequency_hz("comb", "delta", 1.0 / 7e-6);
    const double d_peak = cfg.number("comb", "d_peak", 4.0);
    const double finesse = finesse_from_config(cfg, "comb", d_peak);
    const double d0 = cfg.number("comb", "d0", 0.3);
    const double bandwidth = cfg.frequency_hz("comb", "bandwidth", 20e6);
    const ToothShape shape =
        tooth_shape_from_string(cfg.word("comb", "tooth_shape", "square"));
    const double fwhm = cfg.frequency_hz("comb", "tooth_fwhm", 0.0);
    const int spp =
        static_cast<int>(cfg.integer("comb", "samples_per_period", 128));

    const CombProfile comb =
        build_comb(delta, d_peak, finesse, d0, bandwidth, shape, fwhm, spp);
    const fs::path profile_path = ctx.dir / "comb_profile.csv";
    comb.save_csv(profile_path.string());
    ctx.artifacts.push_back(profile_path.string());

    const EchoEfficiency fourier = fourier_efficiency(comb);
    const double analytic = analytic_efficiency(d_peak, finesse, d0);
    json check;
    check["eta_fourier"] = fourier.eta;
    check["eta_analytic"] = analytic;
    check["c0"] = fourier.c0;
    check["c1_mag"] = fourier.c1_mag;
    check["relative_gap"] =
        analytic > 0.0 ? std::abs(fourier.eta - analytic) / analytic : 0.0;
    ctx.write_json("fourier_vs_analytic.json", check);

    const CombDecay decay{cfg.time_s("decay", "t_fast", 15e-6),
                          cfg.time_s("decay", "t_slow", 165e-6),
                          cfg.number("decay", "weight_fast", 0.45)};
    const double delay_min = cfg.time_s("sweep", "delay_min", 1e-6);
    const double delay_max = cfg.time_s("sweep", "delay_max", 30e-6);
    const long points = cfg.integer("sweep", "points", 30);
    const double noise = cfg.number("sweep", "noise", 0.0);

    const std::vector<double> delays = linspace(delay_min, delay_max, points);
    const std::vector<double> eta =
        efficiency_vs_delay(d_peak, d0, decay, delays);
    std::vector<double> eta_noisy = eta;
    add_relative_noise(eta_noisy, noise, ctx.seed, 0xc0);

    Table sweep;
    sweep.add_column("delay_s", delays);
    sweep.add_column("eta_model", eta);
    sweep.add_column("eta_observed", eta_noisy);
    ctx.write_table("efficiency_vs_delay.csv", sweep);

    // eta(delay) is a double exponential in the delay with T = T2'/4
    const FitResult fit = fit_double_exp(delays, eta_noisy);
    json decay_fit = fit_to_json(fit);
    if (fit.converged) {
        decay_fit["t2_fast_s"] = 4.0 * fit.value("T1");
        decay_fit["t2_slow_s"] = 4.0 * fit.value("T2");
        decay_fit["prefactor"] = fit.value("A1") + fit.value("A2");
    }
    ctx.write_json("decay_fit.json", decay_fit);
}

// --------------------------------------------------------------- pulse

PulseEnvelope pulse_from_config(ScenarioConfig& cfg, double omega_hz,
                                double chirp_hz) {
    const PulseShape shape =
        pulse_shape_from_string(cfg.word("pulse", "shape", "hsh"));
    switch (shape) {
        case PulseShape::hsh: {
            const double t_flat = cfg.time_s("pulse", "t_flat", 5e-6);
            const double edge_fraction =
                cfg.number("pulse", "edge_fraction", 0.1);
            return make_hsh(omega_hz, t_flat, chirp_hz, edge_fraction);
        }
        case PulseShape::sech: {
            const double t_total = cfg.time_s("pulse", "t_total");
            const double beta =
                cfg.number("pulse", "beta_per_s", 10.0 / t_total);
            return make_pulse(PulseShape::sech, omega_hz, t_total, 0.0, beta,
                              chirp_hz);
        }
        case PulseShape::square: {
            const double t_total = cfg.time_s("pulse", "t_total");
            return make_pulse(PulseShape::square, omega_hz, t_total, 0.0, 0.0,
                              chirp_hz);
        }
    }
    throw ConfigError("unreachable pulse shape");
}

std::string mhz_label(double hz) {
    std::ostringstream os;
    os << hz / 1e6;
    return os.str();
}

void run_pulse(ScenarioConfig& cfg, Context& ctx) {
    const double omega = cfg.frequency_hz("pulse", "omega", 0.6e6);
    const double chirp = cfg.frequency_hz("pulse", "chirp", 10e6);
    const PulseEnvelope pulse = pulse_from_config(cfg, omega, chirp);

    {
        const long n = cfg.integer("profile", "envelope_points", 513);
        std::vector<double> t(n), amp(n), phase(n);
        for (long i = 0; i < n; ++i) {
            t[i] = pulse.t_total_s * static_cast<double>(i) /
                   static_cast<double>(n - 1);
            amp[i] = pulse.amplitude_hz(t[i]);
            phase[i] = pulse.phase_rad(t[i]);
        }
        Table env;
        env.add_column("time_s", t);
        env.add_column("amplitude_hz", amp);
        env.add_column("phase_rad", phase);
        ctx.write_table("pulse_envelope.csv", env);
    }

    {
        const double span = cfg.frequency_hz(
            "profile", "span", chirp > 0.0 ? 2.0 * chirp : 8.0 * omega);
        const long n = cfg.integer("profile", "points", 81);
        const std::vector<double> detunings = linspace(-span / 2, span / 2, n);
        const TransferProfile prof =
            transfer_profile(pulse, detunings, ctx.tol);
        Table t;
        t.add_column("detuning_hz", prof.detuning_hz);
        t.add_column("final_inversion", prof.final_inversion);
        t.add_column("transfer_prob", prof.transfer_prob);
        ctx.write_table("transfer_profile.csv", t);
    }

    if (cfg.has_section("sweep")) {
        std::vector<double> omegas_hz;
        for (double v : cfg.number_list("sweep", "omega_list_mhz"))
            omegas_hz.push_back(v * 1e6);
        const double g_lo = cfg.frequency_hz("sweep", "gamma_min", 5e6);
        const double g_hi = cfg.frequency_hz("sweep", "gamma_max", 100e6);
        const long g_n = cfg.integer("sweep", "points", 9);
        const std::string spacing = cfg.word("sweep", "spacing", "log");
        const int avg_points =
            static_cast<int>(cfg.integer("sweep", "avg_points", 33));
        const double t_flat = pulse.t_flat_s > 0.0 ? pulse.t_flat_s
                                                   : pulse.t_total_s;

        const std::vector<double> gammas = spacing == "log"
                                               ? logspace(g_lo, g_hi, g_n)
                                               : linspace(g_lo, g_hi, g_n);
        Table family;
        family.add_column("gamma_hz", gammas);
        for (double om : omegas_hz) {
            std::vector<double> bloch(gammas.size()), eq2(gammas.size());
            for (std::size_t i = 0; i < gammas.size(); ++i) {
                PulseEnvelope p = pulse;
                p.omega_peak_hz = om;
                p.chirp_bw_hz = gammas[i];
                bloch[i] = average_transfer(p, gammas[i], avg_points, ctx.tol);
                eq2[i] = hsh_efficiency_analytic(t_flat, om, gammas[i]).eta;
            }
            family.add_column("bloch_omega_" + mhz_label(om) + "mhz", bloch);
            family.add_column("eq2_omega_" + mhz_label(om) + "mhz", eq2);
        }
        ctx.write_table("eta_family.csv", family);
    }
}

// ---------------------------------------------------------------- spin

void run_spin(ScenarioConfig& cfg, Context& ctx) {
    const double gamma = cfg.frequency_hz("spin", "gamma_mw", 0.73e6);
    const long n_ions = cfg.integer("spin", "n_ions", 100000);
    const double pi_eff = cfg.number("spin", "pi_eff", 0.97);
    const bool has_t2s = cfg.has("spin", "t2s_s") || cfg.has("spin", "t2s_ms") ||
                         cfg.has("spin", "t2s_us") || cfg.has("spin", "t2s_ns");
    const double t2s = has_t2s ? cfg.time_s("spin", "t2s")
                               : std::numeric_limits<double>::infinity();
    const double t_s = cfg.time_s("spin", "t_s", 20e-6);
    const double tau = cfg.time_s("spin", "tau", t_s / 2.0);

    const SpinEnsemble ensemble =
        SpinEnsemble::gaussian(gamma, static_cast<std::size_t>(n_ions),
                               ctx.seed);

    {
        // free-induction decay of the collective amplitude
        const long n = cfg.integer("fid", "points", 101);
        const std::vector<double> t = linspace(0.0, 3.0 / gamma, n);
        const EchoTrace mc = echo_trace(ensemble, {}, t, 1.0,
                                        std::numeric_limits<double>::infinity());
        std::vector<double> analytic(t.size());
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double a = fid_amplitude(gamma, t[i]);
            analytic[i] = a * a;
        }
        Table fid;
        fid.add_column("time_s", t);
        fid.add_column("intensity_mc", mc.intensity);
        fid.add_column("intensity_analytic", analytic);
        ctx.write_table("fid.csv", fid);
    }

    EchoSchedule schedule{t_s, tau, pi_eff, t2s};
    {
        const EchoTrace trace = montecarlo_echo(ensemble, schedule,
                                                static_cast<int>(cfg.integer(
                                                    "echo", "points", 201)));
        Table t;
        t.add_column("time_s", trace.t_s);
        t.add_column("intensity", trace.intensity);
        ctx.write_table("echo_trace.csv", t);
    }

    {
        // Delta T_S scan at fixed MW pulse positions
        const double lo = cfg.time_s("scan", "dts_min", -2e-6);
        const double hi = cfg.time_s("scan", "dts_max", 2e-6);
        const long n = cfg.integer("scan", "points", 41);
        const auto pulses = schedule.pulse_times();
        std::vector<double> dts = linspace(lo, hi, n);
        std::vector<double> sample_times(dts.size());
        for (std::size_t i = 0; i < dts.size(); ++i)
            sample_times[i] = 2.0 * tau + dts[i];
        const EchoTrace mc =
            echo_trace(ensemble, pulses, sample_times, pi_eff, t2s);
        std::vector<double> analytic(dts.size());
        for (std::size_t i = 0; i < dts.size(); ++i) {
            EchoSchedule s = schedule;
            s.t_s = sample_times[i];
            analytic[i] = rephase_intensity(s, gamma);
        }
        Table scan;
        scan.add_column("delta_ts_s", dts);
        scan.add_column("intensity_mc", mc.intensity);
        scan.add_column("intensity_analytic", analytic);
        ctx.write_table("dts_scan.csv", scan);

        const FitResult fit = fit_gaussian_mismatch(dts, mc.intensity);
        json j = fit_to_json(fit);
        if (fit.converged) j["gamma_mw_hz"] = fit.value("Gamma");
        ctx.write_json("gamma_fit.json", j);
    }
}

// ---------------------------------------------------------------- pump

void run_pump(ScenarioConfig& cfg, Context& ctx) {
    const double rate = cfg.number("pump", "rate_per_s", 5000.0);
    const double band = cfg.frequency_hz("pump", "band", 20e6);
    const double clean_t = cfg.time_s("pump", "clean_duration", 0.4);
    const double init_t = cfg.time_s("pump", "init_duration", 0.3);
    const double window = cfg.frequency_hz("pump", "window", 60e6);
    const double step = cfg.frequency_hz("pump", "class_step", 0.5e6);
    const double linewidth = cfg.frequency_hz("pump", "linewidth", 50e3);
    const double ref_depth = cfg.number("pump", "reference_depth", 4.5);
    const double t_fast = cfg.time_s("relaxation", "t_fast", 0.0385);
    const double t_slow = cfg.time_s("relaxation", "t_slow", 0.392);

    const StrengthTable strengths = default_strengths();
    const LevelScheme scheme = default_scheme();
    const RelaxationMatrix relax = two_rate_relaxation(t_fast, t_slow);

    std::vector<SpectralClass> classes = make_class_grid(window, step);
    std::vector<double> grid(classes.size());
    for (std::size_t i = 0; i < classes.size(); ++i)
        grid[i] = classes[i].center_offset_hz;

    {
        const Spectrum thermal = absorption_spectrum(
            classes, strengths, grid, scheme, ref_depth, linewidth);
        Table t;
        t.add_column("detuning_hz", thermal.detuning_hz);
        t.add_column("optical_depth", thermal.depth);
        ctx.write_table("spectrum_thermal.csv", t);
    }

    // class cleaning: all four lines; initialization: nu2..nu4 only
    PumpConfig cleaning;
    cleaning.duration_s = clean_t;
    cleaning.relaxation = relax;
    for (int line = 1; line <= 4; ++line)
        cleaning.beams.push_back({line, rate, band});
    evolve_populations(classes, cleaning, strengths);

    PumpConfig init;
    init.duration_s = init_t;
    init.relaxation = relax;
    for (int line = 2; line <= 4; ++line)
        init.beams.push_back({line, rate, band});
    evolve_populations(classes, init, strengths);

    {
        const Spectrum prepared = absorption_spectrum(
            classes, strengths, grid, scheme, ref_depth, linewidth);
        Table t;
        t.add_column("detuning_hz", prepared.detuning_hz);
        t.add_column("optical_depth", prepared.depth);
        ctx.write_table("spectrum_initialized.csv", t);

        const SpectralClass& central = classes[classes.size() / 2];
        json pops;
        pops["class_offset_hz"] = central.center_offset_hz;
        pops["population"] = central.population;
        pops["population_sum"] = central.population_sum();
        ctx.write_json("populations.json", pops);
    }

    if (cfg.has_section("lifetime")) {
        const double p_lo = cfg.time_s("lifetime", "probe_min", 2e-3);
        const double p_hi = cfg.time_s("lifetime", "probe_max", 1.5);
        const long n = cfg.integer("lifetime", "points", 48);
        const double noise = cfg.number("lifetime", "noise", 0.0);

        const std::vector<double> probes = linspace(p_lo, p_hi, n);
        const HoleLifetimeTrace trace =
            hole_lifetime_trace(classes, relax, probes, strengths, scheme);

        std::vector<double> observed = trace.antihole_contrast;
        add_relative_noise(observed, noise, ctx.seed, 0x11fe);

        Table t;
        t.add_column("time_s", trace.t_s);
        t.add_column("antihole_depth", trace.antihole_nu1);
        t.add_column("hole_depth", trace.hole_nu2);
        t.add_column("antihole_contrast", trace.antihole_contrast);
        t.add_column("hole_contrast", trace.hole_contrast);
        t.add_column("antihole_observed", observed);
        ctx.write_table("hole_lifetime.csv", t);

        const FitResult fit = fit_double_exp(trace.t_s, observed);
        ctx.write_json("lifetime_fit.json", fit_to_json(fit));
    }
}

// ------------------------------------------------------------- storage

StorageParams storage_params_from_config(ScenarioConfig& cfg, Context& ctx) {
    StorageParams p;
    p.inv_delta_s = cfg.time_s("storage", "inv_delta", 7e-6);
    p.t_s_s = cfg.time_s("storage", "t_s", 100e-6);
    p.input_duration_s = cfg.time_s("storage", "input_duration", 0.2e-6);
    p.input_bandwidth_hz = cfg.frequency_hz("storage", "input_bandwidth", 10e6);

    const double c_omega = cfg.frequency_hz("control", "omega", 0.6e6);
    const double c_flat = cfg.time_s("control", "t_flat", 5e-6);
    const double c_chirp = cfg.frequency_hz("control", "chirp", 10e6);
    const double c_edge = cfg.number("control", "edge_fraction", 0.1);
    p.control_pulse = make_hsh(c_omega, c_flat, c_chirp, c_edge);

    p.mw_pulse_duration_s = cfg.time_s("mw", "duration", 10e-6);
    p.mw_chirp_bw_hz = cfg.frequency_hz("mw", "chirp", 3e6);
    p.spin.pi_eff = cfg.number("mw", "pi_eff", 0.97);
    p.spin.gamma_mw_hz = cfg.frequency_hz("spin", "gamma_mw", 0.73e6);
    p.spin.t2s_s = cfg.time_s("spin", "t2s", 1.2e-3);

    const double d_peak = cfg.number("comb", "d_peak", 4.0);
    const double finesse = finesse_from_config(cfg, "comb", d_peak);
    const double d0 = cfg.number("comb", "d0", 0.3);
    const double bandwidth = cfg.frequency_hz("comb", "bandwidth", 20e6);
    const int spp =
        static_cast<int>(cfg.integer("comb", "samples_per_period", 128));
    p.comb = build_comb(1.0 / p.inv_delta_s, d_peak, finesse, d0, bandwidth,
                        ToothShape::square, 0.0, spp);

    p.comb_decay = CombDecay{cfg.time_s("decay", "t_fast", 15e-6),
                             cfg.time_s("decay", "t_slow", 165e-6),
                             cfg.number("decay", "weight_fast", 0.45)};
    p.tol = ctx.tol;
    p.avg_points = static_cast<int>(cfg.integer("storage", "avg_points", 41));
    return p;
}

json budget_to_json(const EfficiencyBudget& b) {
    json j;
    j["eta_afc"] = b.eta_afc;
    j["eta_t_bloch"] = b.eta_t;
    j["eta_t_measured"] = b.eta_t_measured;
    j["eta_mw"] = b.eta_mw;
    j["spin_decay"] = b.spin_decay;
    j["gaussian_mismatch"] = b.gaussian_mismatch;
    j["eta_m_bloch"] = b.eta_m;
    j["eta_m_measured_variant"] = b.eta_m_measured_variant;
    j["measured_reference"] = b.reference_measured_eta_m;
    j["discrepancy_factor_bloch"] = b.discrepancy_factor;
    j["discrepancy_factor_measured"] = b.discrepancy_factor_measured;
    return j;
}

void run_storage(ScenarioConfig& cfg, Context& ctx) {
    StorageParams params = storage_params_from_config(cfg, ctx);

    const SequenceTimeline timeline = build_timeline(params);
    json tl;
    tl["t_m_s"] = timeline.t_m_s;
    tl["events"] = json::array();
    for (const auto& e : timeline.events)
        tl["events"].push_back({{"label", e.label},
                                {"channel", e.channel},
                                {"time_s", e.time_s},
                                {"duration_s", e.duration_s}});
    ctx.write_json("timeline.json", tl);

    const double eta_t =
        average_transfer(params.control_pulse, params.input_bandwidth_hz,
                         params.avg_points, params.tol);
    const EfficiencyBudget budget = efficiency_budget(params, eta_t);
    ctx.write_json("budget.json", budget_to_json(budget));

    {
        const long n = cfg.integer("trace", "points", 4001);
        const double t_max =
            cfg.time_s("trace", "t_max", params.t_m_s() + 10e-6);
        const std::vector<double> grid = linspace(0.0, t_max, n);
        const StorageTrace trace = simulate_storage(params, grid);
        Table t;
        t.add_column("time_s", trace.t_s);
        t.add_column("intensity", trace.intensity);
        ctx.write_table("trace.csv", t);
    }

    if (cfg.has_section("sweep")) {
        const double lo = cfg.time_s("sweep", "ts_min", 100e-6);
        const double hi = cfg.time_s("sweep", "ts_max", 1.3e-3);
        const long n = cfg.integer("sweep", "points", 25);
        const double noise = cfg.number("sweep", "noise", 0.0);

        const std::vector<double> ts = linspace(lo, hi, n);
        std::vector<double> eta_m(ts.size()), t_m(ts.size());
        for (std::size_t i = 0; i < ts.size(); ++i) {
            StorageParams p = params;
            p.t_s_s = ts[i];
            const EfficiencyBudget b = efficiency_budget(p, eta_t);
            eta_m[i] = b.eta_m;
            t_m[i] = p.t_m_s();
        }
        std::vector<double> observed = eta_m;
        add_relative_noise(observed, noise, ctx.seed, 0x3d);

        Table sweep;
        sweep.add_column("t_s_s", ts);
        sweep.add_column("t_m_s", t_m);
        sweep.add_column("eta_m", eta_m);
        sweep.add_column("eta_m_observed", observed);
        ctx.write_table("storage_sweep.csv", sweep);

        // intensity ~ exp(-2 T_S / T2s): fitted T maps to T2s = 2 T
        const FitResult fit = fit_exp(ts, observed);
        json j = fit_to_json(fit);
        if (fit.converged) j["t2s_fitted_s"] = 2.0 * fit.value("T");
        ctx.write_json("t2s_fit.json", j);
    }
}

// ----------------------------------------------------------------- fit

void run_fit(ScenarioConfig& cfg, Context& ctx) {
    const std::string model = cfg.word("fit", "model", "");
    const std::string input = cfg.word("fit", "input", "");
    if (model.empty() || input.empty())
        throw ConfigError("fit scenario needs [fit] model and input keys");

    const Table data = Table::load(input);
    if (data.cols() < 2)
        throw ConfigError("fit input needs at least two columns: " + input);
    const auto& x = data.columns[0];
    const auto& y = data.columns[1];
    std::span<const double> sigma;
    if (data.cols() >= 3) sigma = data.columns[2];

    FitResult fit;
    if (model == "exp") fit = fit_exp(x, y, sigma);
    else if (model == "dexp") fit = fit_double_exp(x, y, sigma);
    else if (model == "gauss") fit = fit_gaussian_mismatch(x, y, sigma);
    else throw ConfigError("unknown fit model '" + model +
                           "' (exp|dexp|gauss)");

    ctx.write_json("fit.json", fit_to_json(fit));
}

}  // namespace

std::vector<std::string> run_scenario(ScenarioConfig cfg,
                                      const RunOptions& options) {
#ifdef _OPENMP
    if (options.threads && *options.threads > 0)
        omp_set_num_threads(*options.threads);
#endif
    Context ctx;
    ctx.dir = options.out_dir;
    fs::create_directories(ctx.dir);
    ctx.seed = options.seed.value_or(cfg.seed());
    ctx.tol = options.tolerance.value_or(
        cfg.number("", "tolerance", 1e-8));

    const std::string kind = cfg.scenario();
    if (kind == "comb") run_comb(cfg, ctx);
    else if (kind == "pulse") run_pulse(cfg, ctx);
    else if (kind == "spin") run_spin(cfg, ctx);
    else if (kind == "pump") run_pump(cfg, ctx);
    else if (kind == "storage") run_storage(cfg, ctx);
    else if (kind == "fit") run_fit(cfg, ctx);
    else
        throw ConfigError("unknown scenario '" + kind +
                          "' (comb|pulse|spin|pump|storage|fit)");

    cfg.reject_unknown_keys();

    json manifest;
    manifest["scenario"] = kind;
    manifest["seed"] = ctx.seed;
    manifest["tolerance"] = ctx.tol;
    manifest["config"] = cfg.resolved();
    json names = json::array();
    for (const auto& a : ctx.artifacts)
        names.push_back(fs::path(a).filename().string());
    manifest["artifacts"] = names;
    ctx.write_json("manifest.json", manifest);

    return ctx.artifacts;
}

// ------------------------------------------------------------ presets

namespace {

struct Preset {
    const char* id;
    const char* description;
    const char* config;
};

const Preset kPresets[] = {
    {"fig1c",
     "hole/antihole lifetime double-exponential (36 ms / 390 ms)",
     R"(scenario = pump
seed = 20200427

[pump]
rate_per_s = 5000
band_mhz = 20
clean_duration_ms = 400
init_duration_ms = 300

[lifetime]
probe_min_ms = 2
probe_max_s = 1.5
points = 48
noise = 0.01
)"},
    {"fig2b",
     "AFC echo efficiency vs delay, double-exponential T2' = 15 / 165 us",
     R"(scenario = comb
seed = 20200427

[comb]
delta_khz = 142.857142857142857
d_peak = 4
finesse = optimal
d0 = 0.3
bandwidth_mhz = 20

[decay]
t_fast_us = 15
t_slow_us = 165
weight_fast = 0.45

[sweep]
delay_min_us = 1
delay_max_us = 30
points = 30
noise = 0.015
)"},
    {"fig3d",
     "spin-wave storage decay, T2s = 1.2 ms",
     R"(scenario = storage
seed = 20200427

[storage]
inv_delta_us = 7
t_s_us = 100
input_duration_ns = 200
input_bandwidth_mhz = 10

[control]
omega_mhz = 0.6
t_flat_us = 5
chirp_mhz = 10

[mw]
duration_us = 10
chirp_mhz = 3
pi_eff = 0.97

[spin]
gamma_mw_mhz = 0.73
t2s_ms = 1.2

[sweep]
ts_min_us = 100
ts_max_ms = 1.3
points = 25
noise = 0.02
)"},
    {"sfig3",
     "spin rephasing mismatch scan, Gamma_MW = 0.73 MHz",
     R"(scenario = spin
seed = 20200427

[spin]
gamma_mw_mhz = 0.73
n_ions = 100000
pi_eff = 0.97
t_s_us = 20
tau_us = 10

[scan]
dts_min_us = -2
dts_max_us = 2
points = 41
)"},
    {"sfig4",
     "HSH transfer efficiency vs chirp bandwidth, Bloch vs closed form",
     R"(scenario = pulse
seed = 20200427

[pulse]
shape = hsh
omega_mhz = 0.6
t_flat_us = 5
chirp_mhz = 10

[sweep]
omega_list_mhz = 0.6 1.0 1.5 2.0
gamma_min_mhz = 5
gamma_max_mhz = 100
points = 9
spacing = log
avg_points = 33
)"},
};

const Preset& find_preset(const std::string& id) {
    for (const auto& p : kPresets)
        if (id == p.id) return p;
    std::string valid;
    for (const auto& p : kPresets) {
        if (!valid.empty()) valid += ", ";
        valid += p.id;
    }
    throw std::invalid_argument("unknown figure id '" + id +
                                "'; valid ids: " + valid);
}

CheckRow make_row(const std::string& name, double paper, double simulated,
                  double tol) {
    CheckRow r;
    r.name = name;
    r.paper_value = paper;
    r.simulated = simulated;
    r.tolerance = tol;
    r.pass = std::isfinite(simulated) &&
             std::abs(simulated - paper) <= tol;
    return r;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

std::string artifact_path(const std::vector<std::string>& artifacts,
                          const std::string& name) {
    for (const auto& a : artifacts)
        if (fs::path(a).filename() == name) return a;
    throw std::runtime_error("artifact not produced: " + name);
}

std::vector<CheckRow> evaluate_checks(const std::string& id,
                                      const std::vector<std::string>& arts) {
    std::vector<CheckRow> rows;
    if (id == "fig1c") {
        const json fit = load_json(artifact_path(arts, "lifetime_fit.json"));
        const double t1 = fit["params"]["T1"]["value"].get<double>();
        const double t2 = fit["params"]["T2"]["value"].get<double>();
        rows.push_back(make_row("fast hole lifetime [s]", 36e-3, t1,
                                0.05 * 36e-3));
        rows.push_back(make_row("slow hole lifetime [s]", 390e-3, t2,
                                0.05 * 390e-3));
    } else if (id == "fig2b") {
        const json fit = load_json(artifact_path(arts, "decay_fit.json"));
        rows.push_back(make_row("AFC decay T2' fast [s]", 15e-6,
                                fit["t2_fast_s"].get<double>(), 0.05 * 15e-6));
        rows.push_back(make_row("AFC decay T2' slow [s]", 165e-6,
                                fit["t2_slow_s"].get<double>(),
                                0.05 * 165e-6));
        rows.push_back(make_row("short-delay prefactor efficiency", 0.24,
                                fit["prefactor"].get<double>(), 0.02));
    } else if (id == "fig3d") {
        const json fit = load_json(artifact_path(arts, "t2s_fit.json"));
        rows.push_back(make_row("spin coherence time T2s [s]", 1.2e-3,
                                fit["t2s_fitted_s"].get<double>(), 0.2e-3));
        const json budget = load_json(artifact_path(arts, "budget.json"));
        const double factor =
            budget["discrepancy_factor_bloch"].get<double>();
        rows.push_back(make_row("predicted/measured efficiency factor", 3.0,
                                factor, 1.0));
    } else if (id == "sfig3") {
        const json fit = load_json(artifact_path(arts, "gamma_fit.json"));
        rows.push_back(make_row("spin inhomogeneous FWHM [Hz]", 0.73e6,
                                fit["gamma_mw_hz"].get<double>(), 0.04e6));
    } else if (id == "sfig4") {
        const Table family =
            Table::load(artifact_path(arts, "eta_family.csv"));
        const auto& gamma = family.column("gamma_hz");
        const std::vector<double> omegas{0.6e6, 1.0e6, 1.5e6, 2.0e6};
        for (double om : omegas) {
            const auto& bloch =
                family.column("bloch_omega_" + mhz_label(om) + "mhz");
            const auto& eq2 =
                family.column("eq2_omega_" + mhz_label(om) + "mhz");
            for (std::size_t i = 0; i < gamma.size(); ++i) {
                const double g = gamma[i];
                const bool probe = std::abs(g - 10e6) < 1e3 ||
                                   std::abs(g - 20e6) < 1e3 ||
                                   std::abs(g - 50e6) < 1e3;
                if (!probe || g < 5.0 * om) continue;
                rows.push_back(make_row(
                    "eta_t Bloch vs closed form, omega " + mhz_label(om) +
                        " MHz, gamma " + mhz_label(g) + " MHz",
                    eq2[i], bloch[i], 0.05));
            }
            // decreasing efficiency on the large-bandwidth tail
            bool monotone = true;
            for (std::size_t i = 1; i < gamma.size(); ++i)
                if (gamma[i - 1] >= 50e6 - 1e3 && bloch[i] > bloch[i - 1])
                    monotone = false;
            rows.push_back(make_row("eta_t decreasing for gamma >= 50 MHz, "
                                    "omega " + mhz_label(om) + " MHz",
                                    1.0, monotone ? 1.0 : 0.0, 0.5));
        }
    } else {
        throw std::invalid_argument("no checks defined for '" + id + "'");
    }
    return rows;
}

}  // namespace

std::vector<std::string> known_figures() {
    std::vector<std::string> ids;
    for (const auto& p : kPresets) ids.push_back(p.id);
    return ids;
}

std::string preset_config_text(const std::string& figure_id) {
    return find_preset(figure_id).config;
}

ReproduceResult reproduce(const std::string& figure_id,
                          const RunOptions& options) {
    const Preset& preset = find_preset(figure_id);

    RunOptions opts = options;
    opts.out_dir = (fs::path(options.out_dir) / figure_id).string();
    ScenarioConfig cfg =
        ScenarioConfig::parse_string(preset.config, "<preset:" + figure_id + ">");

    ReproduceResult result;
    result.figure = figure_id;
    result.artifacts = run_scenario(std::move(cfg), opts);
    result.rows = evaluate_checks(figure_id, result.artifacts);
    result.all_pass = true;
    for (const auto& r : result.rows) result.all_pass &= r.pass;

    json table;
    table["figure"] = figure_id;
    table["description"] = preset.description;
    table["all_pass"] = result.all_pass;
    table["checks"] = json::array();
    for (const auto& r : result.rows)
        table["checks"].push_back({{"name", r.name},
                                   {"paper_value", r.paper_value},
                                   {"simulated", r.simulated},
                                   {"tolerance", r.tolerance},
                                   {"pass", r.pass}});
    const fs::path p = fs::path(opts.out_dir) / "comparison.json";
    std::ofstream out(p);
    out << table.dump(2) << "\n";
    result.artifacts.push_back(p.string());
    return result;
}

}  // namespace afc
