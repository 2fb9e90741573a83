#pragma once

#include <span>
#include <string>
#include <vector>

#include "afc/bloch.hpp"
#include "afc/comb.hpp"
#include "afc/pulse.hpp"
#include "afc/spinline.hpp"

// Full AFC spin-wave storage sequence: timing validation, the
// multiplicative efficiency budget eta_M = eta_AFC eta_t^2 eta_MW^2 *
// spin_decay * mismatch, and the synthetic output trace.
namespace afc {

struct SpinParams {
    double gamma_mw_hz = 0.73e6;
    double t2s_s = 1.2e-3;
    double pi_eff = 0.97;
};

struct StorageParams {
    double inv_delta_s = 0.0;        // AFC delay 1/Delta
    double t_s_s = 0.0;              // spin storage time
    double input_duration_s = 0.0;   // Gaussian FWHM of the input pulse
    double input_bandwidth_hz = 0.0;
    PulseEnvelope control_pulse;
    double mw_pulse_duration_s = 0.0;
    double mw_chirp_bw_hz = 0.0;
    CombProfile comb;
    CombDecay comb_decay{15e-6, 165e-6, 0.45};
    SpinParams spin;
    double tol = 1e-8;
    int avg_points = 41;

    double t_m_s() const { return inv_delta_s + t_s_s; }
    void validate() const;  // throws SchedulingError naming the inequality
};

struct TimelineEvent {
    std::string label;
    std::string channel;  // nu1 | nu2 | nu_mw
    double time_s;        // start
    double duration_s;
};

struct SequenceTimeline {
    std::vector<TimelineEvent> events;
    double t_m_s = 0.0;

    const TimelineEvent& event(const std::string& label) const;
};

// Places input, both control pulses, the MW pi pair (separation exactly
// T_S/2) and the output; rejects schedules where pulses collide with the
// echo window or with each other.
SequenceTimeline build_timeline(const StorageParams& params);

struct EfficiencyBudget {
    double eta_afc = 0.0;        // comb Fourier efficiency times delay decay
    double eta_t = 0.0;          // per control pulse, Bloch average
    double eta_mw = 0.0;         // per MW pi pulse
    double spin_decay = 0.0;     // exp(-2 T_S / T2s)
    double gaussian_mismatch = 1.0;  // 1 at tau = T_S/2
    double eta_m = 0.0;          // product, eta_t and eta_mw squared

    // same budget with the paper-style measured transfer instead of the
    // Bloch value
    double eta_t_measured = 0.90;
    double eta_m_measured_variant = 0.0;

    double reference_measured_eta_m = 0.033;
    double discrepancy_factor = 0.0;           // eta_m / reference
    double discrepancy_factor_measured = 0.0;  // measured variant / reference
};

EfficiencyBudget efficiency_budget(const StorageParams& params);
// Variant with a precomputed control transfer (skips the Bloch average).
EfficiencyBudget efficiency_budget(const StorageParams& params, double eta_t);

struct StorageTrace {
    std::vector<double> t_s;
    std::vector<double> intensity;

    double peak_near(double t_centre_s, double window_s) const;
};

// Output-mode intensity: unit-peak Gaussian input, the residual two-level
// echo at 1/Delta suppressed by the control transfer, and the recalled
// output at T_M with peak eta_M.
StorageTrace simulate_storage(const StorageParams& params,
                              std::span<const double> time_grid_s);

}  // namespace afc
