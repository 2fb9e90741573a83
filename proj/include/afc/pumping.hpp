#pragma once

#include <array>
#include <span>
#include <vector>

#include "afc/levels.hpp"

// Rate-equation model of class cleaning, state initialization and
// spectral-hole relaxation. Each spectral class is a closed four-level
// ground manifold; optical pumping on the four working lines empties the
// resonant ground state and redistributes population through the
// excited-state branching ratios (the strength-table columns). The
// excited state is adiabatically eliminated: pump and branch happen in
// one step.
namespace afc {

struct SpectralClass {
    double center_offset_hz = 0.0;      // optical detuning of this class's nu1
    std::array<double, 4> population{}; // ground-state occupations, sum 1

    double population_sum() const;
};

// Uniformly spaced classes over [-window/2, +window/2], thermal 1/4 each.
std::vector<SpectralClass> make_class_grid(double window_hz, double step_hz);

struct PumpBeam {
    int line = 1;              // which working frequency, 1..4
    double rate_per_s = 0.0;   // peak pump rate
    double bandwidth_hz = 0.0; // classes within +-bw/2 of resonance are pumped
};

using RelaxationMatrix = std::array<std::array<double, 4>, 4>;

struct PumpConfig {
    std::vector<PumpBeam> beams;
    double duration_s = 0.0;
    double inhom_fwhm_hz = 1.3e9;
    RelaxationMatrix relaxation{};  // symmetric ground-state rates, 1/s

    void validate() const;
};

// Cross-relaxation defaults: the fast rate couples |4>g<->|3>g and
// |1>g<->|2>g, the slow one |4>g<->|2>g and |1>g<->|3>g. Values are
// calibrated so the fitted double-exponential antihole decay comes out
// at 36 ms / 390 ms.
RelaxationMatrix default_relaxation();
RelaxationMatrix two_rate_relaxation(double t_fast_s, double t_slow_s);

// Advances every class by config.duration_s. RK4 with a step bounded by
// the fastest rate; populations are conserved per step and checked
// non-negative. OpenMP over classes; `_serial` is the reference path.
void evolve_populations(std::vector<SpectralClass>& classes,
                        const PumpConfig& config,
                        const StrengthTable& strengths);
void evolve_populations_serial(std::vector<SpectralClass>& classes,
                               const PumpConfig& config,
                               const StrengthTable& strengths);

struct Spectrum {
    std::vector<double> detuning_hz;
    std::vector<double> depth;
};

// d(delta) summed over classes and the four working transitions,
// Lorentzian line per class, normalized so the unprepared (thermal) line
// peaks at reference_depth.
Spectrum absorption_spectrum(std::span<const SpectralClass> classes,
                             const StrengthTable& strengths,
                             std::span<const double> grid_hz,
                             const LevelScheme& scheme = default_scheme(),
                             double reference_depth = 4.5,
                             double linewidth_hz = 50e3);

struct HoleLifetimeTrace {
    std::vector<double> t_s;
    std::vector<double> antihole_nu1;      // optical depth at the nu1 peak
    std::vector<double> hole_nu2;          // optical depth at the nu2 position
    std::vector<double> antihole_contrast; // antihole minus thermal depth
    std::vector<double> hole_contrast;     // thermal depth minus hole
};

// Free relaxation (no pumps) of the given prepared classes, probed at the
// requested times.
HoleLifetimeTrace hole_lifetime_trace(std::vector<SpectralClass> classes,
                                      const RelaxationMatrix& relaxation,
                                      std::span<const double> probe_times_s,
                                      const StrengthTable& strengths,
                                      const LevelScheme& scheme = default_scheme());

}  // namespace afc
