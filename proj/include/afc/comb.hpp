#pragma once

#include <span>
#include <string>
#include <vector>

#include "afc/fit.hpp"

// Atomic-frequency-comb absorption profiles and echo efficiency. Two
// independent routes are kept side by side: the closed-form optimal-comb
// expression (d/F)^2 sinc^2(pi/F) exp(-d/F - d0) and a numeric Fourier
// route eta = |c1|^2 exp(-c0) evaluated on the sampled profile.
namespace afc {

enum class ToothShape { square, gaussian, lorentzian };

ToothShape tooth_shape_from_string(const std::string& s);
std::string to_string(ToothShape shape);

struct CombProfile {
    double delta_hz = 0.0;      // tooth spacing
    double d_peak = 0.0;        // tooth height above background
    double finesse = 1.0;       // delta / tooth width
    double d0 = 0.0;            // background optical depth
    double bandwidth_hz = 0.0;  // total sampled span
    ToothShape tooth_shape = ToothShape::square;
    double tooth_fwhm_hz = 0.0;  // gaussian/lorentzian teeth

    // Cell-averaged optical depth on a uniform grid of cell centres
    // (step = delta / samples_per_period), symmetric about zero detuning.
    std::vector<double> detuning_hz;
    std::vector<double> depth;

    double grid_step_hz() const;
    double samples_per_period() const;

    void save_csv(const std::string& path) const;
    // Reads back the two-column samples written by save_csv.
    static CombProfile load_csv(const std::string& path);
};

// Samples a comb over [-bandwidth/2, +bandwidth/2]. Square teeth have
// width delta/finesse and height d_peak on the d0 baseline; gaussian and
// lorentzian teeth have the given FWHM, peak-normalized to d_peak.
CombProfile build_comb(double delta_hz, double d_peak, double finesse,
                       double d0, double bandwidth_hz,
                       ToothShape shape = ToothShape::square,
                       double tooth_fwhm_hz = 0.0,
                       int samples_per_period = 128);

// F = pi / arctan(2 pi / d), the finesse maximizing the echo efficiency
// of a square-tooth comb of depth d.
double optimal_finesse(double d);

// (d/F)^2 sinc^2(pi/F) exp(-d/F - d0) with sinc(x) = sin(x)/x.
double analytic_efficiency(double d, double finesse, double d0);

struct EchoEfficiency {
    double eta = 0.0;     // intensity efficiency
    double c0 = 0.0;      // mean optical depth over one period
    double c1_mag = 0.0;  // first Fourier coefficient magnitude
};

// Numeric Fourier route over one central period of the sampled profile.
// Requires at least 64 samples per period.
EchoEfficiency fourier_efficiency(const CombProfile& comb);

// Two-component comb dephasing model: each component decays as
// exp(-4 * delay / T) with delay = 1/Delta.
struct CombDecay {
    double t_fast_s;
    double t_slow_s;
    double weight_fast = 0.0;  // 0 => single component t_slow_s
};

double two_component_decay(const CombDecay& decay, double delay_s);

// eta(1/Delta) = analytic_efficiency(d, F_opt(d), d0) * decay(1/Delta).
std::vector<double> efficiency_vs_delay(double d, double d0, double t2_star_s,
                                        std::span<const double> delays_s);
std::vector<double> efficiency_vs_delay(double d, double d0,
                                        const CombDecay& decay,
                                        std::span<const double> delays_s);

struct BroadenedDecayResult {
    double t2_star_s = 0.0;          // fitted effective comb dephasing time
    std::vector<double> delays_s;    // probed delays
    std::vector<double> eta;         // Fourier-route efficiencies
    FitResult fit;
};

// Builds a comb at Delta = 1/delay for each delay with the given broadened
// tooth shape, runs the Fourier route and fits exp(-4 delay / T2*).
// OpenMP over delays; the `_serial` variant is the reference path.
BroadenedDecayResult broadened_comb_decay(ToothShape shape,
                                          double tooth_fwhm_hz,
                                          std::span<const double> delays_s,
                                          double d_peak = 4.0, double d0 = 0.0,
                                          int samples_per_period = 128);
BroadenedDecayResult broadened_comb_decay_serial(
    ToothShape shape, double tooth_fwhm_hz, std::span<const double> delays_s,
    double d_peak = 4.0, double d0 = 0.0, int samples_per_period = 128);

}  // namespace afc
