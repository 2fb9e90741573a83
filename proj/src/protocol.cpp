#include "afc/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "afc/errors.hpp"
#include "afc/units.hpp"

namespace afc {
namespace {

// margin kept between a control pulse and the echo / output windows
double echo_margin(const StorageParams& p) { return p.input_duration_s; }

}  // namespace

void StorageParams::validate() const {
    if (inv_delta_s <= 0.0 || t_s_s <= 0.0 || input_duration_s <= 0.0)
        throw SchedulingError("StorageParams: all durations must be > 0");
    if (input_bandwidth_hz <= 0.0)
        throw SchedulingError("StorageParams: input bandwidth must be > 0");
    if (comb.bandwidth_hz > 0.0 && input_bandwidth_hz > comb.bandwidth_hz)
        throw SchedulingError(
            "StorageParams: input_bandwidth <= comb bandwidth violated");
    if (input_duration_s * input_bandwidth_hz < 1.0)
        throw SchedulingError(
            "StorageParams: input_duration * comb bandwidth >= 1 violated "
            "(input pulse shorter than the comb can hold)");
    if (inv_delta_s < 5.0 * input_duration_s)
        throw SchedulingError(
            "StorageParams: 1/Delta >= 5 * input_duration violated");
    if (comb.delta_hz > 0.0 &&
        std::abs(inv_delta_s * comb.delta_hz - 1.0) > 1e-3)
        throw SchedulingError(
            "StorageParams: comb tooth spacing does not match 1/Delta");
    if (spin.pi_eff < 0.0 || spin.pi_eff > 1.0)
        throw SchedulingError("StorageParams: pi_eff must be in [0,1]");
    if (!(spin.t2s_s > 0.0))
        throw SchedulingError("StorageParams: T2s must be > 0");
}

const TimelineEvent& SequenceTimeline::event(const std::string& label) const {
    for (const auto& e : events)
        if (e.label == label) return e;
    throw std::invalid_argument("SequenceTimeline: no event '" + label + "'");
}

SequenceTimeline build_timeline(const StorageParams& params) {
    params.validate();

    const double control_dur = params.control_pulse.t_total_s;
    const double margin = echo_margin(params);
    const double c1 = params.inv_delta_s - control_dur - margin;
    if (c1 < params.input_duration_s)
        throw SchedulingError(
            "build_timeline: control pulse does not fit between input and "
            "echo window: input_duration <= 1/Delta - control_duration - "
            "margin violated");

    const double c1_end = c1 + control_dur;
    const double mw_dur = params.mw_pulse_duration_s;
    // MW pi pair centred in the spin-wave window, separation exactly T_S/2
    const double mw1_centre = c1_end + params.t_s_s / 4.0;
    const double mw2_centre = mw1_centre + params.t_s_s / 2.0;
    if (params.t_s_s / 4.0 < mw_dur / 2.0)
        throw SchedulingError(
            "build_timeline: MW pulse overlaps first control pulse: "
            "T_S/4 >= mw_duration/2 violated");
    if (params.t_s_s / 4.0 < mw_dur / 2.0 + control_dur + margin)
        throw SchedulingError(
            "build_timeline: MW pulse overlaps second control pulse: "
            "T_S/4 >= mw_duration/2 + control_duration + margin violated");

    SequenceTimeline tl;
    tl.t_m_s = params.t_m_s();
    tl.events.push_back({"input", "nu1", 0.0, params.input_duration_s});
    tl.events.push_back({"control1", "nu2", c1, control_dur});
    tl.events.push_back({"mw_pi_1", "nu_mw", mw1_centre - mw_dur / 2.0, mw_dur});
    tl.events.push_back({"mw_pi_2", "nu_mw", mw2_centre - mw_dur / 2.0, mw_dur});
    tl.events.push_back({"control2", "nu2", c1 + params.t_s_s, control_dur});
    tl.events.push_back({"output", "nu1", tl.t_m_s, params.input_duration_s});

    std::sort(tl.events.begin(), tl.events.end(),
              [](const TimelineEvent& a, const TimelineEvent& b) {
                  return a.time_s < b.time_s;
              });

    // belt check: no overlap between any optical/MW pulse pair
    for (std::size_t i = 0; i < tl.events.size(); ++i)
        for (std::size_t j = i + 1; j < tl.events.size(); ++j) {
            const auto& a = tl.events[i];
            const auto& b = tl.events[j];
            const bool overlap = a.time_s < b.time_s + b.duration_s &&
                                 b.time_s < a.time_s + a.duration_s;
            if (overlap)
                throw SchedulingError("build_timeline: events '" + a.label +
                                      "' and '" + b.label + "' overlap");
        }
    return tl;
}

EfficiencyBudget efficiency_budget(const StorageParams& params) {
    params.validate();
    const double eta_t =
        average_transfer(params.control_pulse, params.input_bandwidth_hz,
                         params.avg_points, params.tol);
    return efficiency_budget(params, eta_t);
}

EfficiencyBudget efficiency_budget(const StorageParams& params, double eta_t) {
    params.validate();

    EfficiencyBudget b;
    b.eta_afc = fourier_efficiency(params.comb).eta *
                two_component_decay(params.comb_decay, params.inv_delta_s);
    b.eta_t = eta_t;
    b.eta_mw = params.spin.pi_eff;
    b.spin_decay = std::exp(-2.0 * params.t_s_s / params.spin.t2s_s);
    b.gaussian_mismatch = 1.0;  // MW pair separation is T_S/2 by construction

    b.eta_m = b.eta_afc * b.eta_t * b.eta_t * b.eta_mw * b.eta_mw *
              b.spin_decay * b.gaussian_mismatch;
    b.eta_m_measured_variant = b.eta_afc * b.eta_t_measured *
                               b.eta_t_measured * b.eta_mw * b.eta_mw *
                               b.spin_decay * b.gaussian_mismatch;
    b.discrepancy_factor = b.eta_m / b.reference_measured_eta_m;
    b.discrepancy_factor_measured =
        b.eta_m_measured_variant / b.reference_measured_eta_m;
    return b;
}

double StorageTrace::peak_near(double t_centre_s, double window_s) const {
    double peak = 0.0;
    for (std::size_t i = 0; i < t_s.size(); ++i)
        if (std::abs(t_s[i] - t_centre_s) <= window_s / 2.0)
            peak = std::max(peak, intensity[i]);
    return peak;
}

StorageTrace simulate_storage(const StorageParams& params,
                              std::span<const double> time_grid_s) {
    build_timeline(params);  // validates the schedule
    const EfficiencyBudget budget = efficiency_budget(params);

    const double sigma =
        params.input_duration_s / (2.0 * std::sqrt(2.0 * kLn2));
    const double t_in = params.input_duration_s / 2.0;
    // coherence left in the comb keeps emitting the two-level echo
    const double leak = 1.0 - budget.eta_t;
    const double echo_peak = budget.eta_afc * leak * leak;

    const auto gauss = [sigma](double t, double centre) {
        const double x = (t - centre) / sigma;
        return std::exp(-0.5 * x * x);
    };

    StorageTrace trace;
    trace.t_s.assign(time_grid_s.begin(), time_grid_s.end());
    trace.intensity.resize(time_grid_s.size());
    for (std::size_t i = 0; i < trace.t_s.size(); ++i) {
        const double t = trace.t_s[i];
        trace.intensity[i] = gauss(t, t_in) +
                             echo_peak * gauss(t, t_in + params.inv_delta_s) +
                             budget.eta_m * gauss(t, t_in + params.t_m_s());
    }
    return trace;
}

}  // namespace afc
