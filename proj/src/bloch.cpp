#include "afc/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "afc/errors.hpp"
#include "afc/ode.hpp"
#include "afc/units.hpp"

namespace afc {
namespace {

using State3 = StateVec<3>;

struct BlochRhs {
    const PulseEnvelope& pulse;
    double detuning_hz;

    State3 operator()(double t, const State3& y) const {
        const double det = angular(detuning_hz - pulse.frequency_hz(t));
        const double rabi = angular(pulse.amplitude_hz(t));
        return {-det * y[1], det * y[0] + rabi * y[2], -rabi * y[1]};
    }
};

State3 to_vec(const BlochState& s) { return {s.u, s.v, s.w}; }
BlochState to_state(const State3& y) { return {y[0], y[1], y[2]}; }

}  // namespace

double BlochState::norm() const { return std::sqrt(u * u + v * v + w * w); }

double BlochTrajectory::max_norm_drift() const {
    double drift = 0.0;
    for (const auto& s : state)
        drift = std::max(drift, std::abs(s.norm() - 1.0));
    return drift;
}

BlochTrajectory evolve(const BlochState& initial, const PulseEnvelope& pulse,
                       double detuning_hz, double tol) {
    if (tol <= 0.0) throw std::invalid_argument("evolve: tol must be > 0");
    BlochTrajectory traj;
    const BlochRhs rhs{pulse, detuning_hz};
    integrate_adaptive<3>(rhs, to_vec(initial), 0.0, pulse.t_total_s, tol,
                          [&](double t, const State3& y) {
                              traj.t_s.push_back(t);
                              traj.state.push_back(to_state(y));
                          });
    return traj;
}

BlochState evolve_final(const BlochState& initial, const PulseEnvelope& pulse,
                        double detuning_hz, double tol) {
    if (tol <= 0.0) throw std::invalid_argument("evolve: tol must be > 0");
    const BlochRhs rhs{pulse, detuning_hz};
    return to_state(
        integrate<3>(rhs, to_vec(initial), 0.0, pulse.t_total_s, tol));
}

namespace {

TransferProfile transfer_profile_impl(const PulseEnvelope& pulse,
                                      std::span<const double> detunings_hz,
                                      double tol, bool parallel) {
    if (detunings_hz.empty())
        throw std::invalid_argument("transfer_profile: empty detuning list");

    TransferProfile out;
    out.detuning_hz.assign(detunings_hz.begin(), detunings_hz.end());
    out.final_inversion.resize(detunings_hz.size());
    out.transfer_prob.resize(detunings_hz.size());

    bool failed = false;
    double fail_detuning = 0.0, fail_time = 0.0;

    const auto eval_one = [&](std::size_t i) {
        try {
            const BlochState fin =
                evolve_final(BlochState{}, pulse, detunings_hz[i], tol);
            out.final_inversion[i] = fin.w;
            out.transfer_prob[i] = (fin.w + 1.0) / 2.0;
        } catch (const IntegrationFailure& e) {
#pragma omp critical
            if (!failed) {
                failed = true;
                fail_detuning = detunings_hz[i];
                fail_time = e.time_s;
            }
        }
    };

    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < static_cast<long>(detunings_hz.size()); ++i)
            eval_one(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < detunings_hz.size(); ++i) eval_one(i);
    }

    if (failed)
        throw IntegrationFailure("transfer_profile: integration failed at "
                                 "detuning " + std::to_string(fail_detuning) +
                                 " Hz", fail_time);
    return out;
}

}  // namespace

TransferProfile transfer_profile(const PulseEnvelope& pulse,
                                 std::span<const double> detunings_hz,
                                 double tol) {
    return transfer_profile_impl(pulse, detunings_hz, tol, true);
}

TransferProfile transfer_profile_serial(const PulseEnvelope& pulse,
                                        std::span<const double> detunings_hz,
                                        double tol) {
    return transfer_profile_impl(pulse, detunings_hz, tol, false);
}

double average_transfer(const PulseEnvelope& pulse, double gamma_bw_hz,
                        int n_points, double tol) {
    if (n_points < 21)
        throw std::invalid_argument("average_transfer: need >= 21 points");
    if (gamma_bw_hz <= 0.0)
        throw std::invalid_argument("average_transfer: bandwidth must be > 0");

    std::vector<double> detunings(n_points);
    for (int i = 0; i < n_points; ++i)
        detunings[i] = gamma_bw_hz * (static_cast<double>(i) / (n_points - 1) -
                                      0.5);
    const TransferProfile prof = transfer_profile(pulse, detunings, tol);

    double num = 0.0, den = 0.0;
    for (int i = 0; i < n_points; ++i) {
        const double w = (i == 0 || i == n_points - 1) ? 0.5 : 1.0;
        num += w * prof.transfer_prob[i];
        den += w;
    }
    return num / den;
}

HshAnalytic hsh_efficiency_analytic(double t_flat_s, double omega_hz,
                                    double gamma_bw_hz) {
    if (t_flat_s <= 0.0 || omega_hz < 0.0 || gamma_bw_hz <= 0.0)
        throw std::invalid_argument(
            "hsh_efficiency_analytic: need T > 0, omega >= 0, gamma > 0");
    HshAnalytic out;
    out.narrow_bandwidth_warning = gamma_bw_hz < 3.0 * omega_hz;
    // 0.5 * pi * T * W^2 / G with W, G angular reduces to this in Hz
    const double exponent =
        kPi * kPi * omega_hz * omega_hz * t_flat_s / gamma_bw_hz;
    out.eta = 1.0 - std::exp(-exponent);
    return out;
}

RabiTrace rabi_trace(double omega_hz, double duration_s, double detuning_hz,
                     int n_samples, double tol) {
    if (duration_s <= 0.0)
        throw std::invalid_argument("rabi_trace: duration must be > 0");
    if (n_samples < 16)
        throw std::invalid_argument("rabi_trace: need >= 16 samples");

    const PulseEnvelope drive =
        make_pulse(PulseShape::square, omega_hz, duration_s);
    const BlochRhs rhs{drive, detuning_hz};

    RabiTrace trace;
    trace.t_s.resize(n_samples);
    for (int i = 0; i < n_samples; ++i)
        trace.t_s[i] = duration_s * i / (n_samples - 1.0);
    const auto states =
        integrate_sampled<3>(rhs, to_vec(BlochState{}), 0.0, trace.t_s, tol);
    trace.w.resize(n_samples);
    for (int i = 0; i < n_samples; ++i) trace.w[i] = states[i][2];
    return trace;
}

}  // namespace afc
