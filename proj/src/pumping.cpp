#include "afc/pumping.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "afc/units.hpp"

namespace afc {

double SpectralClass::population_sum() const {
    return population[0] + population[1] + population[2] + population[3];
}

std::vector<SpectralClass> make_class_grid(double window_hz, double step_hz) {
    if (window_hz <= 0.0 || step_hz <= 0.0)
        throw std::invalid_argument("make_class_grid: window and step > 0");
    const long m = static_cast<long>(std::floor(window_hz / (2.0 * step_hz)));
    std::vector<SpectralClass> classes;
    classes.reserve(2 * m + 1);
    for (long j = -m; j <= m; ++j) {
        SpectralClass c;
        c.center_offset_hz = j * step_hz;
        c.population = {0.25, 0.25, 0.25, 0.25};
        classes.push_back(c);
    }
    return classes;
}

void PumpConfig::validate() const {
    if (duration_s < 0.0)
        throw std::invalid_argument("PumpConfig: duration must be >= 0");
    for (const auto& b : beams) {
        if (b.line < 1 || b.line > 4)
            throw std::invalid_argument("PumpConfig: beam line must be 1..4");
        if (b.rate_per_s < 0.0 || b.bandwidth_hz < 0.0)
            throw std::invalid_argument(
                "PumpConfig: beam rate and bandwidth must be >= 0");
    }
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            if (relaxation[i][j] < 0.0)
                throw std::invalid_argument(
                    "PumpConfig: relaxation rates must be >= 0");
            if (std::abs(relaxation[i][j] - relaxation[j][i]) > 1e-12)
                throw std::invalid_argument(
                    "PumpConfig: relaxation matrix must be symmetric");
        }
}

RelaxationMatrix two_rate_relaxation(double t_fast_s, double t_slow_s) {
    if (t_fast_s <= 0.0 || t_slow_s <= 0.0)
        throw std::invalid_argument("two_rate_relaxation: timescales > 0");
    RelaxationMatrix w{};
    const double fast = 1.0 / (2.0 * t_fast_s);  // antihole mode decays at 2w
    const double slow = 1.0 / (2.0 * t_slow_s);
    w[3][2] = w[2][3] = fast;  // |4>g <-> |3>g
    w[0][1] = w[1][0] = fast;  // |1>g <-> |2>g
    w[3][1] = w[1][3] = slow;  // |4>g <-> |2>g
    w[0][2] = w[2][0] = slow;  // |1>g <-> |3>g
    return w;
}

RelaxationMatrix default_relaxation() {
    // Fitted so the double-exponential antihole decay reads 36 / 390 ms;
    // the fast and fast+slow eigenmodes overlap, which shifts the fitted
    // fast constant slightly below 1/(2 w_fast).
    return two_rate_relaxation(0.0385, 0.392);
}

namespace {

struct ClassRates {
    // per-beam effective pump-out rate for this class (already gated by
    // the beam band), paired with the pumped transition
    std::array<double, 4> pump_rate{};  // indexed by beam slot
    std::array<NamedTransition, 4> transition{};
    int n_beams = 0;
};

std::array<double, 4> rhs(const std::array<double, 4>& p,
                          const ClassRates& rates,
                          const std::array<std::array<double, 4>, 4>& branch,
                          const RelaxationMatrix& relax) {
    std::array<double, 4> dp{};
    for (int b = 0; b < rates.n_beams; ++b) {
        const int g = rates.transition[b].ground - 1;
        const int e = rates.transition[b].excited - 1;
        const double out = rates.pump_rate[b] * p[g];
        dp[g] -= out;
        for (int gp = 0; gp < 4; ++gp) dp[gp] += out * branch[gp][e];
    }
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) dp[i] += relax[i][j] * (p[j] - p[i]);
    return dp;
}

void evolve_impl(std::vector<SpectralClass>& classes, const PumpConfig& config,
                 const StrengthTable& strengths, bool parallel) {
    config.validate();
    strengths.validate();
    if (config.duration_s == 0.0) return;

    // branching from excited state e: column e of the table, normalized
    std::array<std::array<double, 4>, 4> branch{};
    for (int e = 0; e < 4; ++e) {
        double col = 0.0;
        for (int g = 0; g < 4; ++g) col += strengths.rel[g][e];
        for (int g = 0; g < 4; ++g) branch[g][e] = strengths.rel[g][e] / col;
    }

    double relax_rate = 0.0;
    for (int i = 0; i < 4; ++i) {
        double row = 0.0;
        for (int j = 0; j < 4; ++j)
            if (i != j) row += config.relaxation[i][j];
        relax_rate = std::max(relax_rate, row);
    }

    const auto evolve_class = [&](SpectralClass& cls) {
        ClassRates rates;
        double pump_rate = 0.0;
        for (const auto& beam : config.beams) {
            if (std::abs(cls.center_offset_hz) > beam.bandwidth_hz / 2.0)
                continue;
            const NamedTransition tr = pump_transition(beam.line);
            const double eff =
                beam.rate_per_s *
                transition_strength(strengths, tr.ground, tr.excited);
            if (eff <= 0.0) continue;
            if (rates.n_beams >= 4)
                throw std::invalid_argument(
                    "evolve_populations: more than 4 beams on one class");
            rates.pump_rate[rates.n_beams] = eff;
            rates.transition[rates.n_beams] = tr;
            ++rates.n_beams;
            pump_rate = std::max(pump_rate, eff);
        }

        const double max_rate = std::max(pump_rate + relax_rate, 1e-12);
        for (int attempt = 0; attempt < 8; ++attempt) {
            const double dt_target =
                std::min(0.05 / max_rate, config.duration_s) /
                static_cast<double>(1 << attempt);
            const long n_steps = std::max(
                1L, static_cast<long>(std::ceil(config.duration_s / dt_target)));
            const double dt = config.duration_s / n_steps;

            std::array<double, 4> p = cls.population;
            bool ok = true;
            for (long s = 0; s < n_steps && ok; ++s) {
                const auto k1 = rhs(p, rates, branch, config.relaxation);
                std::array<double, 4> tmp;
                for (int i = 0; i < 4; ++i) tmp[i] = p[i] + 0.5 * dt * k1[i];
                const auto k2 = rhs(tmp, rates, branch, config.relaxation);
                for (int i = 0; i < 4; ++i) tmp[i] = p[i] + 0.5 * dt * k2[i];
                const auto k3 = rhs(tmp, rates, branch, config.relaxation);
                for (int i = 0; i < 4; ++i) tmp[i] = p[i] + dt * k3[i];
                const auto k4 = rhs(tmp, rates, branch, config.relaxation);
                for (int i = 0; i < 4; ++i)
                    p[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

                double minp = p[0];
                for (double v : p) minp = std::min(minp, v);
                if (minp < -1e-12) {
                    ok = false;  // undershoot, retry with halved step
                } else if (minp < 0.0) {
                    double sum = 0.0;
                    for (auto& v : p) {
                        v = std::max(v, 0.0);
                        sum += v;
                    }
                    for (auto& v : p) v /= sum;
                }
            }
            if (ok) {
                cls.population = p;
                return;
            }
        }
        throw std::runtime_error(
            "evolve_populations: step instability (negative population) at "
            "class offset " + std::to_string(cls.center_offset_hz) + " Hz");
    };

    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < static_cast<long>(classes.size()); ++i)
            evolve_class(classes[static_cast<std::size_t>(i)]);
    } else {
        for (auto& cls : classes) evolve_class(cls);
    }
}

double lorentzian_peak1(double x, double fwhm) {
    const double r = 2.0 * x / fwhm;
    return 1.0 / (1.0 + r * r);
}

double spectrum_value(std::span<const SpectralClass> classes,
                      const StrengthTable& strengths,
                      const LevelScheme& scheme, double delta_hz,
                      double linewidth_hz, bool thermal) {
    double acc = 0.0;
    for (const auto& cls : classes) {
        for (int line = 1; line <= 4; ++line) {
            const NamedTransition tr = pump_transition(line);
            const double pop =
                thermal ? 0.25 : cls.population[tr.ground - 1];
            if (pop == 0.0) continue;
            const double centre = scheme.offset_hz(line) + cls.center_offset_hz;
            acc += pop *
                   transition_strength(strengths, tr.ground, tr.excited) *
                   lorentzian_peak1(delta_hz - centre, linewidth_hz);
        }
    }
    return acc;
}

}  // namespace

void evolve_populations(std::vector<SpectralClass>& classes,
                        const PumpConfig& config,
                        const StrengthTable& strengths) {
    evolve_impl(classes, config, strengths, true);
}

void evolve_populations_serial(std::vector<SpectralClass>& classes,
                               const PumpConfig& config,
                               const StrengthTable& strengths) {
    evolve_impl(classes, config, strengths, false);
}

Spectrum absorption_spectrum(std::span<const SpectralClass> classes,
                             const StrengthTable& strengths,
                             std::span<const double> grid_hz,
                             const LevelScheme& scheme, double reference_depth,
                             double linewidth_hz) {
    if (classes.empty())
        throw std::invalid_argument("absorption_spectrum: no classes");
    if (grid_hz.empty())
        throw std::invalid_argument("absorption_spectrum: empty grid");

    const double thermal_peak =
        spectrum_value(classes, strengths, scheme, 0.0, linewidth_hz, true);
    const double scale = reference_depth / thermal_peak;

    Spectrum spec;
    spec.detuning_hz.assign(grid_hz.begin(), grid_hz.end());
    spec.depth.resize(grid_hz.size());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(grid_hz.size()); ++i)
        spec.depth[i] = scale * spectrum_value(classes, strengths, scheme,
                                               grid_hz[i], linewidth_hz, false);
    return spec;
}

HoleLifetimeTrace hole_lifetime_trace(std::vector<SpectralClass> classes,
                                      const RelaxationMatrix& relaxation,
                                      std::span<const double> probe_times_s,
                                      const StrengthTable& strengths,
                                      const LevelScheme& scheme) {
    for (std::size_t i = 1; i < probe_times_s.size(); ++i)
        if (probe_times_s[i] <= probe_times_s[i - 1])
            throw std::invalid_argument(
                "hole_lifetime_trace: probe times must be increasing");

    const double nu2 = scheme.offset_hz(2);
    const std::array<double, 2> probes{0.0, nu2};

    // thermal reference with the same normalization convention
    std::vector<SpectralClass> thermal = classes;
    for (auto& c : thermal) c.population = {0.25, 0.25, 0.25, 0.25};
    const Spectrum ref = absorption_spectrum(thermal, strengths, probes, scheme);
    const double thermal_nu1 = ref.depth[0];
    const double thermal_nu2 = ref.depth[1];

    PumpConfig relax_only;
    relax_only.relaxation = relaxation;

    HoleLifetimeTrace trace;
    double t_prev = 0.0;
    for (double t : probe_times_s) {
        relax_only.duration_s = t - t_prev;
        evolve_populations(classes, relax_only, strengths);
        t_prev = t;
        const Spectrum s =
            absorption_spectrum(classes, strengths, probes, scheme);
        trace.t_s.push_back(t);
        trace.antihole_nu1.push_back(s.depth[0]);
        trace.hole_nu2.push_back(s.depth[1]);
        trace.antihole_contrast.push_back(s.depth[0] - thermal_nu1);
        trace.hole_contrast.push_back(thermal_nu2 - s.depth[1]);
    }
    return trace;
}

}  // namespace afc
