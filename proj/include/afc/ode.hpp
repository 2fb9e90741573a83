#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "afc/errors.hpp"

// Dormand-Prince 5(4) with embedded error estimate and PI step control.
// Small fixed-size states only; the Bloch vector is N = 3.
namespace afc {

template <std::size_t N>
using StateVec = std::array<double, N>;

namespace detail {

template <std::size_t N>
StateVec<N> axpy(const StateVec<N>& y, double h, const StateVec<N>& d) {
    StateVec<N> r;
    for (std::size_t i = 0; i < N; ++i) r[i] = y[i] + h * d[i];
    return r;
}

}  // namespace detail

struct OdeStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

// Integrates dy/dt = rhs(t, y) from t0 to t1. `observer(t, y)` is called
// after every accepted step (and once at t0). The error estimate of each
// step is kept below `tol` in the mixed absolute/relative sense; O(1)
// state components are assumed.
template <std::size_t N, class RHS, class Observer>
StateVec<N> integrate_adaptive(RHS&& rhs, StateVec<N> y, double t0, double t1,
                               double tol, Observer&& observer,
                               OdeStats* stats = nullptr) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                            c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                            a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                            a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113,
                            b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    // b - b_hat, the 5th-minus-4th order difference used for the estimate
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                            e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;

    if (tol <= 0.0) throw std::invalid_argument("integrate: tol must be > 0");
    const double span = t1 - t0;
    if (span <= 0.0) {
        observer(t0, y);
        return y;
    }

    double t = t0;
    double h = span / 100.0;
    const double h_min = span * 1e-14;
    StateVec<N> k1 = rhs(t, y);
    double prev_err = 1.0;
    observer(t0, y);

    while (t < t1) {
        h = std::min(h, t1 - t);
        const StateVec<N> k2 = rhs(t + c2 * h, detail::axpy(y, a21 * h, k1));
        StateVec<N> tmp;
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        const StateVec<N> k3 = rhs(t + c3 * h, tmp);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        const StateVec<N> k4 = rhs(t + c4 * h, tmp);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] +
                                 a54 * k4[i]);
        const StateVec<N> k5 = rhs(t + c5 * h, tmp);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                 a64 * k4[i] + a65 * k5[i]);
        const StateVec<N> k6 = rhs(t + h, tmp);
        StateVec<N> y_new;
        for (std::size_t i = 0; i < N; ++i)
            y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                   b5 * k5[i] + b6 * k6[i]);
        const StateVec<N> k7 = rhs(t + h, y_new);  // FSAL

        double err = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                   e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double scale =
                tol + tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
            err += (ei / scale) * (ei / scale);
        }
        err = std::sqrt(err / N);

        if (err <= 1.0) {
            t += h;
            y = y_new;
            k1 = k7;
            observer(t, y);
            if (stats) ++stats->accepted;
            // PI controller (order 5): mild damping keeps h smooth
            const double fac = 0.9 * std::pow(err > 0 ? err : 1e-10, -0.7 / 5.0) *
                               std::pow(prev_err, 0.4 / 5.0);
            h *= std::clamp(fac, 0.2, 5.0);
            prev_err = std::max(err, 1e-10);
        } else {
            if (stats) ++stats->rejected;
            h *= std::max(0.2, 0.9 * std::pow(err, -1.0 / 5.0));
            if (h < h_min)
                throw IntegrationFailure("step size underflow", t);
        }
    }
    return y;
}

template <std::size_t N, class RHS>
StateVec<N> integrate(RHS&& rhs, const StateVec<N>& y0, double t0, double t1,
                      double tol, OdeStats* stats = nullptr) {
    return integrate_adaptive(
        rhs, y0, t0, t1, tol, [](double, const StateVec<N>&) {}, stats);
}

// States at caller-supplied times (strictly increasing, starting >= t0).
template <std::size_t N, class RHS>
std::vector<StateVec<N>> integrate_sampled(RHS&& rhs, StateVec<N> y, double t0,
                                           const std::vector<double>& times,
                                           double tol) {
    std::vector<StateVec<N>> out;
    out.reserve(times.size());
    double t = t0;
    for (double target : times) {
        if (target < t)
            throw std::invalid_argument("integrate_sampled: times not increasing");
        if (target > t) y = integrate<N>(rhs, y, t, target, tol);
        t = target;
        out.push_back(y);
    }
    return out;
}

}  // namespace afc
