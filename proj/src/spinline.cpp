#include "afc/spinline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "afc/rng.hpp"
#include "afc/units.hpp"

namespace afc {

SpinEnsemble SpinEnsemble::gaussian(double gamma_mw_hz, std::size_t n,
                                    std::uint64_t seed) {
    if (gamma_mw_hz < 0.0)
        throw std::invalid_argument("SpinEnsemble: linewidth must be >= 0");
    if (n < 1) throw std::invalid_argument("SpinEnsemble: need >= 1 ion");
    SpinEnsemble e;
    e.seed = seed;
    e.detuning_hz.resize(n);
    const double sigma = gamma_mw_hz / std::sqrt(8.0 * kLn2);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < static_cast<long>(n); ++i)
        e.detuning_hz[i] = sigma * normal_draw(seed, static_cast<std::uint64_t>(i));
    return e;
}

double SpinEnsemble::sample_fwhm_hz() const {
    const std::size_t n = detuning_hz.size();
    if (n < 2) return 0.0;
    double mean = 0.0;
    for (double d : detuning_hz) mean += d;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double d : detuning_hz) var += (d - mean) * (d - mean);
    var /= static_cast<double>(n - 1);
    return std::sqrt(8.0 * kLn2 * var);
}

std::array<double, 2> EchoSchedule::pulse_times() const {
    return {t_s / 2.0 - tau / 2.0, t_s / 2.0 + tau / 2.0};
}

void EchoSchedule::validate() const {
    if (!(tau > 0.0) || !(tau < t_s))
        throw std::invalid_argument("EchoSchedule: need 0 < tau < t_s");
    if (pi_eff < 0.0 || pi_eff > 1.0)
        throw std::invalid_argument("EchoSchedule: pi_eff must be in [0,1]");
    if (!(t2s_s > 0.0))
        throw std::invalid_argument("EchoSchedule: t2s must be > 0");
}

double fid_amplitude(double gamma_mw_hz, double t_s) {
    if (t_s < 0.0) throw std::invalid_argument("fid_amplitude: t must be >= 0");
    const double x = kPi * gamma_mw_hz * t_s;
    return std::exp(-x * x / (4.0 * kLn2));
}

double rephase_intensity(const EchoSchedule& schedule, double gamma_mw_hz) {
    schedule.validate();
    const double mismatch = schedule.t_s - 2.0 * schedule.tau;
    const double x = kPi * gamma_mw_hz * mismatch;
    const double gauss = std::exp(-x * x / (2.0 * kLn2));
    const double decay = std::isinf(schedule.t2s_s)
                             ? 1.0
                             : std::exp(-2.0 * schedule.t_s / schedule.t2s_s);
    return schedule.pi_eff * schedule.pi_eff * decay * gauss;
}

double EchoTrace::at(double t) const {
    if (t_s.empty()) throw std::invalid_argument("EchoTrace: empty trace");
    const auto it = std::lower_bound(t_s.begin(), t_s.end(), t);
    if (it == t_s.begin()) return intensity.front();
    if (it == t_s.end()) return intensity.back();
    const std::size_t i = static_cast<std::size_t>(it - t_s.begin());
    const double f = (t - t_s[i - 1]) / (t_s[i] - t_s[i - 1]);
    return intensity[i - 1] + f * (intensity[i] - intensity[i - 1]);
}

double EchoTrace::peak_time() const {
    std::size_t best = 0;
    for (std::size_t i = 1; i < intensity.size(); ++i)
        if (intensity[i] > intensity[best]) best = i;
    return t_s[best];
}

namespace {

EchoTrace echo_trace_impl(const SpinEnsemble& ensemble,
                          std::span<const double> pulse_times_s,
                          std::span<const double> sample_times_s,
                          double pi_eff, double t2s_s, bool parallel) {
    if (ensemble.detuning_hz.empty())
        throw std::invalid_argument("echo_trace: empty ensemble");
    if (!ensemble.weight.empty() &&
        ensemble.weight.size() != ensemble.detuning_hz.size())
        throw std::invalid_argument("echo_trace: weight size mismatch");

    std::vector<double> pulses(pulse_times_s.begin(), pulse_times_s.end());
    std::sort(pulses.begin(), pulses.end());

    EchoTrace trace;
    trace.t_s.assign(sample_times_s.begin(), sample_times_s.end());
    trace.intensity.resize(sample_times_s.size());

    const auto& det = ensemble.detuning_hz;
    const auto& wgt = ensemble.weight;

    const auto eval_one = [&](std::size_t k) {
        const double t = trace.t_s[k];
        // phase conjugations before t fold into an effective evolution
        // time: phi_i(t) = 2 pi delta_i * (t - 2 p_m + 2 p_{m-1} - ...)
        double t_eff = t;
        double sign = -2.0;
        int applied = 0;
        for (std::size_t p = pulses.size(); p-- > 0;) {
            if (pulses[p] >= t) continue;
            t_eff += sign * pulses[p];
            sign = -sign;
            ++applied;
        }

        double re = 0.0, im = 0.0, norm = 0.0;
        for (std::size_t i = 0; i < det.size(); ++i) {
            const double phase = kTwoPi * det[i] * t_eff;
            const double w = wgt.empty() ? 1.0 : wgt[i];
            re += w * std::cos(phase);
            im += w * std::sin(phase);
            norm += w;
        }
        double amp = std::sqrt(re * re + im * im) / norm;
        for (int p = 0; p < applied; ++p) amp *= std::sqrt(pi_eff);
        if (!std::isinf(t2s_s)) amp *= std::exp(-t / t2s_s);
        trace.intensity[k] = amp * amp;
    };

    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long k = 0; k < static_cast<long>(trace.t_s.size()); ++k)
            eval_one(static_cast<std::size_t>(k));
    } else {
        for (std::size_t k = 0; k < trace.t_s.size(); ++k) eval_one(k);
    }
    return trace;
}

}  // namespace

EchoTrace echo_trace(const SpinEnsemble& ensemble,
                     std::span<const double> pulse_times_s,
                     std::span<const double> sample_times_s, double pi_eff,
                     double t2s_s) {
    return echo_trace_impl(ensemble, pulse_times_s, sample_times_s, pi_eff,
                           t2s_s, true);
}

EchoTrace echo_trace_serial(const SpinEnsemble& ensemble,
                            std::span<const double> pulse_times_s,
                            std::span<const double> sample_times_s,
                            double pi_eff, double t2s_s) {
    return echo_trace_impl(ensemble, pulse_times_s, sample_times_s, pi_eff,
                           t2s_s, false);
}

EchoTrace montecarlo_echo(const SpinEnsemble& ensemble,
                          const EchoSchedule& schedule, int n_points,
                          double window_s) {
    schedule.validate();
    if (ensemble.detuning_hz.size() < 1000)
        throw std::invalid_argument("montecarlo_echo: need >= 1e3 ions");
    if (n_points < 3)
        throw std::invalid_argument("montecarlo_echo: need >= 3 points");

    double window = window_s;
    if (window <= 0.0) {
        // a few dephasing times around the recall, estimated from the sample
        const double fwhm = std::max(ensemble.sample_fwhm_hz(), 1.0);
        window = 6.0 / fwhm;
    }
    const auto pulses = schedule.pulse_times();
    std::vector<double> times(n_points);
    const double t0 = schedule.t_s - window / 2.0;
    for (int i = 0; i < n_points; ++i)
        times[i] = t0 + window * i / (n_points - 1.0);

    return echo_trace(ensemble, pulses, times, schedule.pi_eff, schedule.t2s_s);
}

}  // namespace afc
