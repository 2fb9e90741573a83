#include "afc/pulse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "afc/units.hpp"

namespace afc {
namespace {

double sech(double x) { return 1.0 / std::cosh(x); }

// log(cosh(x)) without overflow for large |x|
double log_cosh(double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a)) - kLn2;
}

}  // namespace

PulseShape pulse_shape_from_string(const std::string& s) {
    if (s == "square") return PulseShape::square;
    if (s == "sech") return PulseShape::sech;
    if (s == "hsh") return PulseShape::hsh;
    throw std::invalid_argument("unknown pulse shape '" + s +
                                "' (square|sech|hsh)");
}

std::string to_string(PulseShape shape) {
    switch (shape) {
        case PulseShape::square: return "square";
        case PulseShape::sech: return "sech";
        case PulseShape::hsh: return "hsh";
    }
    return "?";
}

double PulseEnvelope::amplitude_hz(double t) const {
    if (t < 0.0 || t > t_total_s) return 0.0;
    switch (shape) {
        case PulseShape::square:
            return omega_peak_hz;
        case PulseShape::sech:
            return omega_peak_hz * sech(edge_beta * (t - t_total_s / 2.0));
        case PulseShape::hsh: {
            const double t_edge = (t_total_s - t_flat_s) / 2.0;
            if (t < t_edge)
                return omega_peak_hz * sech(edge_beta * (t - t_edge));
            if (t > t_edge + t_flat_s)
                return omega_peak_hz *
                       sech(edge_beta * (t - t_edge - t_flat_s));
            return omega_peak_hz;
        }
    }
    return 0.0;
}

double PulseEnvelope::frequency_hz(double t) const {
    if (chirp_bw_hz == 0.0) return 0.0;
    t = std::clamp(t, 0.0, t_total_s);
    double f = 0.0;
    switch (shape) {
        case PulseShape::square:
            f = chirp_bw_hz * (t / t_total_s - 0.5);
            break;
        case PulseShape::sech: {
            const double half = t_total_s / 2.0;
            f = (chirp_bw_hz / 2.0) * std::tanh(edge_beta * (t - half)) /
                std::tanh(edge_beta * half);
            break;
        }
        case PulseShape::hsh: {
            const double t_edge = (t_total_s - t_flat_s) / 2.0;
            const double rate = chirp_bw_hz / t_flat_s;
            if (t < t_edge)
                f = -chirp_bw_hz / 2.0 +
                    (rate / edge_beta) * std::tanh(edge_beta * (t - t_edge));
            else if (t > t_edge + t_flat_s)
                f = chirp_bw_hz / 2.0 +
                    (rate / edge_beta) *
                        std::tanh(edge_beta * (t - t_edge - t_flat_s));
            else
                f = rate * (t - t_edge - t_flat_s / 2.0);
            break;
        }
    }
    return chirp_sign * f;
}

double PulseEnvelope::phase_rad(double t) const {
    if (chirp_bw_hz == 0.0) return 0.0;
    t = std::clamp(t, 0.0, t_total_s);
    double integral = 0.0;  // of frequency_hz from 0 to t, without sign
    switch (shape) {
        case PulseShape::square:
            integral = chirp_bw_hz * (t * t / (2.0 * t_total_s) - t / 2.0);
            break;
        case PulseShape::sech: {
            const double half = t_total_s / 2.0;
            const double scale =
                (chirp_bw_hz / 2.0) / std::tanh(edge_beta * half);
            integral = scale / edge_beta *
                       (log_cosh(edge_beta * (t - half)) -
                        log_cosh(edge_beta * half));
            break;
        }
        case PulseShape::hsh: {
            const double t_edge = (t_total_s - t_flat_s) / 2.0;
            const double rate = chirp_bw_hz / t_flat_s;
            const double t_mid = t_edge + t_flat_s / 2.0;
            const double beta = edge_beta;
            const auto edge_int = [&](double u) {  // integral of tanh term
                return rate / (beta * beta) * log_cosh(beta * u);
            };
            // rise contribution up to min(t, t_edge)
            const double tr = std::min(t, t_edge);
            integral = -chirp_bw_hz / 2.0 * tr +
                       (edge_int(tr - t_edge) - edge_int(-t_edge));
            if (t > t_edge) {
                const double tf = std::min(t, t_edge + t_flat_s);
                const double a = t_edge - t_mid, b = tf - t_mid;
                integral += rate * (b * b - a * a) / 2.0;
            }
            if (t > t_edge + t_flat_s) {
                const double u = t - t_edge - t_flat_s;
                integral += chirp_bw_hz / 2.0 * u + edge_int(u);
            }
            break;
        }
    }
    return kTwoPi * chirp_sign * integral;
}

double PulseEnvelope::area_rad() const {
    // composite Simpson; the envelopes are smooth
    const int n = 2048;
    const double h = t_total_s / n;
    double acc = amplitude_hz(0.0) + amplitude_hz(t_total_s);
    for (int i = 1; i < n; ++i)
        acc += amplitude_hz(i * h) * (i % 2 ? 4.0 : 2.0);
    return kTwoPi * acc * h / 3.0;
}

PulseEnvelope make_pulse(PulseShape shape, double omega_peak_hz,
                         double t_total_s, double t_flat_s, double edge_beta,
                         double chirp_bw_hz) {
    if (t_total_s <= 0.0)
        throw std::invalid_argument("make_pulse: t_total must be > 0");
    if (omega_peak_hz < 0.0)
        throw std::invalid_argument("make_pulse: omega_peak must be >= 0");
    if (chirp_bw_hz < 0.0)
        throw std::invalid_argument("make_pulse: chirp_bw must be >= 0");

    PulseEnvelope p;
    p.shape = shape;
    p.omega_peak_hz = omega_peak_hz;
    p.t_total_s = t_total_s;
    p.chirp_bw_hz = chirp_bw_hz;

    switch (shape) {
        case PulseShape::square:
            break;
        case PulseShape::sech:
            if (edge_beta <= 0.0)
                throw std::invalid_argument(
                    "make_pulse: sech needs edge_beta > 0");
            p.edge_beta = edge_beta;
            break;
        case PulseShape::hsh: {
            if (t_flat_s <= 0.0 || t_flat_s > t_total_s)
                throw std::invalid_argument(
                    "make_pulse: hsh needs 0 < t_flat <= t_total");
            const double t_edge = (t_total_s - t_flat_s) / 2.0;
            if (t_edge <= 0.0)
                throw std::invalid_argument(
                    "make_pulse: hsh needs t_flat < t_total to fit the edges");
            p.t_flat_s = t_flat_s;
            p.edge_beta = edge_beta > 0.0 ? edge_beta : 6.0 / t_edge;
            break;
        }
    }
    return p;
}

PulseEnvelope make_hsh(double omega_peak_hz, double t_flat_s,
                       double chirp_bw_hz, double edge_fraction) {
    if (edge_fraction <= 0.0 || edge_fraction >= 0.5)
        throw std::invalid_argument("make_hsh: edge_fraction must be in (0,0.5)");
    const double t_total = t_flat_s / (1.0 - 2.0 * edge_fraction);
    return make_pulse(PulseShape::hsh, omega_peak_hz, t_total, t_flat_s, 0.0,
                      chirp_bw_hz);
}

PulseEnvelope reversed(const PulseEnvelope& pulse) {
    PulseEnvelope p = pulse;
    p.chirp_sign = -pulse.chirp_sign;
    return p;
}

}  // namespace afc
