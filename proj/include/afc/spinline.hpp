#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

// Inhomogeneously broadened spin transition: Gaussian free-induction
// dephasing at rate ~Gamma_MW, rephasing by a pair of instantaneous MW
// pi pulses, and the Monte-Carlo phase-bookkeeping oracle for the
// analytic mismatch factor.
namespace afc {

struct SpinEnsemble {
    std::vector<double> detuning_hz;  // per-ion spin detunings
    std::vector<double> weight;       // empty = uniform
    std::uint64_t seed = 0;

    // N detunings from a Gaussian of the given FWHM. Draw i depends only
    // on (seed, i), so the ensemble is identical for any thread count.
    static SpinEnsemble gaussian(double gamma_mw_hz, std::size_t n,
                                 std::uint64_t seed);

    double sample_fwhm_hz() const;  // sqrt(8 ln 2) * sample std deviation
};

// Pair of MW pi pulses separated by tau inside a spin storage window of
// length t_s; perfect rephasing at the readout needs tau = t_s / 2.
struct EchoSchedule {
    double t_s;
    double tau;
    double pi_eff = 0.97;  // population efficiency per pi pulse
    double t2s_s = std::numeric_limits<double>::infinity();

    // Pulse times centred in the window; only the separation matters for
    // the recalled phase.
    std::array<double, 2> pulse_times() const;
    void validate() const;
};

// Collective |<exp(i phi)>| after free dephasing for time t:
// exp(-pi^2 Gamma^2 t^2 / (4 ln 2)), the amplitude whose square is the
// Gaussian intensity kernel.
double fid_amplitude(double gamma_mw_hz, double t_s);

// Relative recalled intensity:
// pi_eff^2 * exp(-2 t_s / T2s) * exp(-pi^2 Gamma^2 (t_s - 2 tau)^2 / (2 ln 2)).
double rephase_intensity(const EchoSchedule& schedule, double gamma_mw_hz);

struct EchoTrace {
    std::vector<double> t_s;
    std::vector<double> intensity;

    double at(double t) const;  // linear interpolation
    double peak_time() const;
};

// |<exp(i phi(t))>|^2 with ideal phase conjugation at each pulse time and
// an amplitude factor sqrt(pi_eff) per pulse already applied before t.
// OpenMP over sample times; `_serial` is the reference path. The sum over
// ions runs in a fixed order, so results are identical either way.
EchoTrace echo_trace(const SpinEnsemble& ensemble,
                     std::span<const double> pulse_times_s,
                     std::span<const double> sample_times_s, double pi_eff,
                     double t2s_s);
EchoTrace echo_trace_serial(const SpinEnsemble& ensemble,
                            std::span<const double> pulse_times_s,
                            std::span<const double> sample_times_s,
                            double pi_eff, double t2s_s);

// Recalled intensity sampled in a window around the readout time t_s.
EchoTrace montecarlo_echo(const SpinEnsemble& ensemble,
                          const EchoSchedule& schedule, int n_points = 201,
                          double window_s = 0.0);

}  // namespace afc
