#pragma once

#include <span>
#include <vector>

#include "afc/pulse.hpp"

// Two-level optical Bloch dynamics in the chirped rotating frame:
//   du/dt = -D'(t) v
//   dv/dt =  D'(t) u + W(t) w
//   dw/dt = -W(t) v
// with D'(t) = 2 pi (detuning - instantaneous chirp) and W(t) the angular
// Rabi rate. No relaxation: the control pulses (<= 10 us) are short
// against the 600 us optical coherence time.
namespace afc {

struct BlochState {
    double u = 0.0;
    double v = 0.0;
    double w = -1.0;

    double norm() const;
};

struct BlochTrajectory {
    std::vector<double> t_s;
    std::vector<BlochState> state;

    const BlochState& final_state() const { return state.back(); }
    double max_norm_drift() const;  // max | ||state|| - 1 |
};

// Integrates over the full pulse window [0, t_total], recording every
// accepted step. Local error is kept below tol per step.
BlochTrajectory evolve(const BlochState& initial, const PulseEnvelope& pulse,
                       double detuning_hz, double tol = 1e-8);

// Final state only (no trajectory storage).
BlochState evolve_final(const BlochState& initial, const PulseEnvelope& pulse,
                        double detuning_hz, double tol = 1e-8);

struct TransferProfile {
    std::vector<double> detuning_hz;
    std::vector<double> final_inversion;
    std::vector<double> transfer_prob;  // (w_final + 1) / 2 from w = -1
};

// Population transfer starting from w = -1 at each detuning. OpenMP over
// detunings; the `_serial` variant is the bit-identical reference path.
TransferProfile transfer_profile(const PulseEnvelope& pulse,
                                 std::span<const double> detunings_hz,
                                 double tol = 1e-8);
TransferProfile transfer_profile_serial(const PulseEnvelope& pulse,
                                        std::span<const double> detunings_hz,
                                        double tol = 1e-8);

// Trapezoid average of the transfer probability over the chirp band
// [-gamma_bw/2, +gamma_bw/2] on an n_points grid (n_points >= 21).
double average_transfer(const PulseEnvelope& pulse, double gamma_bw_hz,
                        int n_points = 41, double tol = 1e-8);

struct HshAnalytic {
    double eta = 0.0;
    // set when gamma_bw < 3 omega, outside the validity of the formula
    bool narrow_bandwidth_warning = false;
};

// eta_t = 1 - exp(-pi^2 Omega^2 T / Gamma) in ordinary-frequency units,
// i.e. the 0.5 pi T W^2 / G form with W and G taken as angular rates.
HshAnalytic hsh_efficiency_analytic(double t_flat_s, double omega_hz,
                                    double gamma_bw_hz);

struct RabiTrace {
    std::vector<double> t_s;
    std::vector<double> w;
};

// Constant drive at fixed detuning, sampled uniformly; w(t) oscillates at
// the generalized Rabi frequency sqrt(omega^2 + detuning^2).
RabiTrace rabi_trace(double omega_hz, double duration_s, double detuning_hz,
                     int n_samples = 4096, double tol = 1e-8);

}  // namespace afc
