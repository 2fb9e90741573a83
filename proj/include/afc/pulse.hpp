#pragma once

#include <string>

namespace afc {

enum class PulseShape { square, sech, hsh };

PulseShape pulse_shape_from_string(const std::string& s);
std::string to_string(PulseShape shape);

// Time-dependent drive envelope on [0, t_total]. Amplitudes are Rabi
// frequencies in ordinary Hz; frequency_hz(t) is the instantaneous chirp
// offset of the drive, swept monotonically across chirp_bw and centred
// on zero.
//
// The HSH amplitude is sech-rise / flat / sech-fall with the chirp rate
// chirp_bw / t_flat over the flat segment; the tanh frequency tails of
// the edges continue the sweep smoothly past the nominal band.
struct PulseEnvelope {
    PulseShape shape = PulseShape::square;
    double omega_peak_hz = 0.0;
    double t_total_s = 0.0;
    double t_flat_s = 0.0;    // central constant-amplitude segment (hsh)
    double edge_beta = 0.0;   // sech steepness, rad/s
    double chirp_bw_hz = 0.0; // total frequency sweep, 0 = unchirped
    int chirp_sign = 1;       // -1 = time-reversed sweep

    double amplitude_hz(double t) const;
    double frequency_hz(double t) const;
    double phase_rad(double t) const;  // 2 pi * integral of frequency_hz
    double area_rad() const;           // integral of 2 pi * amplitude
};

// Validates and assembles an envelope. For hsh the edges are
// (t_total - t_flat)/2 each; edge_beta <= 0 picks the default 6/edge.
PulseEnvelope make_pulse(PulseShape shape, double omega_peak_hz,
                         double t_total_s, double t_flat_s = 0.0,
                         double edge_beta = 0.0, double chirp_bw_hz = 0.0);

// HSH with edges given as a fraction of the total duration (10% each by
// default, short enough to have negligible effect on the transfer).
PulseEnvelope make_hsh(double omega_peak_hz, double t_flat_s,
                       double chirp_bw_hz, double edge_fraction = 0.1);

// Time-reversed, phase-conjugated counterpart: same (symmetric)
// amplitude, opposite sweep direction.
PulseEnvelope reversed(const PulseEnvelope& pulse);

}  // namespace afc
