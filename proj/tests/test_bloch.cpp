#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <vector>

#include "afc/bloch.hpp"
#include "afc/fit.hpp"
#include "afc/units.hpp"

using namespace afc;

namespace {

// closed-form inversion for a constant drive: w(t) for w(0) = -1
double rabi_w(double omega_hz, double detuning_hz, double t) {
    const double o = angular(omega_hz), d = angular(detuning_hz);
    const double g2 = o * o + d * d;
    if (g2 == 0.0) return -1.0;
    const double g = std::sqrt(g2);
    return -(d * d + o * o * std::cos(g * t)) / g2;
}

PulseEnvelope square(double omega_hz, double duration_s) {
    return make_pulse(PulseShape::square, omega_hz, duration_s);
}

}  // namespace

TEST_CASE("resonant pi and 2pi square pulses") {
    // pi pulse: 2 pi Omega t = pi at Omega t = 1/2
    const double omega = 2.0e6;
    const BlochState after_pi =
        evolve_final(BlochState{}, square(omega, 0.25e-6), 0.0, 1e-10);
    CHECK(std::abs(after_pi.w - 1.0) <= 1e-6);

    const BlochState after_2pi =
        evolve_final(BlochState{}, square(omega, 0.5e-6), 0.0, 1e-10);
    CHECK(std::abs(after_2pi.w + 1.0) <= 1e-6);
}

TEST_CASE("detuned square drive follows the generalized Rabi solution") {
    const double omega = 2.0e6, delta = 1.3e6;
    const PulseEnvelope p = square(omega, 3e-6);
    const BlochTrajectory traj = evolve(BlochState{}, p, delta, 1e-10);
    for (std::size_t i = 0; i < traj.t_s.size(); i += 7) {
        const double expected = rabi_w(omega, delta, traj.t_s[i]);
        CHECK(std::abs(traj.state[i].w - expected) <= 1e-5);
    }
}

TEST_CASE("bloch norm is conserved along trajectories") {
    const double tol = 1e-8;
    const BlochTrajectory a =
        evolve(BlochState{}, square(1.5e6, 10e-6), 0.7e6, tol);
    CHECK(a.max_norm_drift() <= 10.0 * tol);

    const BlochTrajectory b =
        evolve(BlochState{}, make_hsh(0.6e6, 5e-6, 10e6), 2e6, tol);
    CHECK(b.max_norm_drift() <= 10.0 * tol);
}

TEST_CASE("forward then reversed phase-conjugated pulse returns home") {
    const double tol = 1e-9;
    const PulseEnvelope p = make_hsh(1.0e6, 5e-6, 10e6);
    for (double detuning : {0.0, 1.7e6}) {
        const BlochState mid = evolve_final(BlochState{}, p, detuning, tol);
        BlochState conj{mid.u, -mid.v, mid.w};
        const BlochState back = evolve_final(conj, reversed(p), detuning, tol);
        CHECK(std::abs(back.u - 0.0) <= 100.0 * tol);
        CHECK(std::abs(-back.v - 0.0) <= 100.0 * tol);
        CHECK(std::abs(back.w + 1.0) <= 100.0 * tol);
    }
}

TEST_CASE("rabi trace frequencies match sqrt(Omega^2 + Delta^2)") {
    const RabiTrace mw = rabi_trace(0.65e6, 10e-6, 0.0);
    CHECK(dominant_frequency(mw.t_s, mw.w) ==
          doctest::Approx(0.65e6).epsilon(0.01));

    // off-resonant drive oscillates faster
    const RabiTrace detuned = rabi_trace(2.0e6, 5e-6, 2.0e6);
    CHECK(dominant_frequency(detuned.t_s, detuned.w) ==
          doctest::Approx(std::sqrt(8.0) * 1e6).epsilon(0.01));

    const RabiTrace off = rabi_trace(0.0, 1e-6, 1e6);
    for (double w : off.w) CHECK(w == doctest::Approx(-1.0));
}

TEST_CASE("adiabatic hsh transfer profile is a top hat") {
    const PulseEnvelope p = make_hsh(2.0e6, 5e-6, 10e6);

    std::vector<double> central;
    for (int i = 0; i <= 16; ++i) central.push_back(-4e6 + 8e6 * i / 16.0);
    const TransferProfile prof = transfer_profile(p, central);
    for (double tp : prof.transfer_prob) CHECK(tp > 0.95);

    // far outside the chirp window almost nothing moves
    const std::vector<double> outside{15e6, -15e6, 20e6};
    for (double tp : transfer_profile(p, outside).transfer_prob)
        CHECK(tp < 0.05);

    // no drive, no transfer
    const PulseEnvelope off = make_hsh(0.0, 5e-6, 10e6);
    for (double tp : transfer_profile(off, central).transfer_prob)
        CHECK(tp == doctest::Approx(0.0));
}

TEST_CASE("transfer profile is symmetric in detuning") {
    const PulseEnvelope p = make_hsh(1.0e6, 5e-6, 10e6);
    for (double d : {1e6, 3e6, 4.8e6, 7e6}) {
        const std::vector<double> pair{-d, d};
        const TransferProfile prof = transfer_profile(p, pair);
        CHECK(std::abs(prof.transfer_prob[0] - prof.transfer_prob[1]) <= 1e-3);
    }
}

TEST_CASE("parallel and serial transfer profiles are bit-identical") {
    const PulseEnvelope p = make_hsh(1.0e6, 5e-6, 10e6);
    std::vector<double> detunings;
    for (int i = 0; i < 24; ++i) detunings.push_back(-6e6 + 0.5e6 * i);
    const TransferProfile par = transfer_profile(p, detunings);
    const TransferProfile ser = transfer_profile_serial(p, detunings);
    for (std::size_t i = 0; i < detunings.size(); ++i)
        CHECK(par.transfer_prob[i] == ser.transfer_prob[i]);
}

TEST_CASE("hsh closed form matches the paper working point") {
    const HshAnalytic a = hsh_efficiency_analytic(5e-6, 0.6e6, 10e6);
    // exponent pi^2 0.36 5 / 10 = 1.777
    CHECK(a.eta == doctest::Approx(1.0 - std::exp(-1.7765)).epsilon(1e-3));
    CHECK_FALSE(a.narrow_bandwidth_warning);

    const HshAnalytic warn = hsh_efficiency_analytic(5e-6, 2.0e6, 5e6);
    CHECK(warn.narrow_bandwidth_warning);

    // monotone vanishing at large bandwidth
    double prev = 1.0;
    for (double g = 10e6; g <= 1e9; g *= 2.0) {
        const double eta = hsh_efficiency_analytic(5e-6, 0.6e6, g).eta;
        CHECK(eta < prev);
        prev = eta;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("bloch average matches the closed form at the working point") {
    const PulseEnvelope p = make_hsh(0.6e6, 5e-6, 10e6);
    const double bloch = average_transfer(p, 10e6, 41);
    const double analytic = hsh_efficiency_analytic(5e-6, 0.6e6, 10e6).eta;
    CHECK(std::abs(bloch - analytic) <= 0.05);
    CHECK_THROWS_AS(average_transfer(p, 10e6, 11), std::invalid_argument);
}

TEST_CASE("evolve validates its tolerance") {
    CHECK_THROWS_AS(evolve(BlochState{}, square(1e6, 1e-6), 0.0, 0.0),
                    std::invalid_argument);
}
