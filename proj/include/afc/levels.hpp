#pragma once

#include <array>
#include <cstddef>

// Hyperfine level scheme and relative oscillator strengths of the
// 171Yb:YSO site-II zero-field working point. Four ground and four
// excited hyperfine states; the storage Lambda system couples |4>g and
// |3>g to |1>e.
namespace afc {

struct LevelScheme {
    // Absolute optical transition frequencies of the four pumping lines, Hz.
    double nu1_hz;
    double nu2_hz;
    double nu3_hz;
    double nu4_hz;
    // Spin transition |4>g <-> |3>g, Hz.
    double nu_mw_hz;

    std::array<int, 4> ground_labels{1, 2, 3, 4};
    std::array<int, 4> excited_labels{1, 2, 3, 4};

    // Offsets of the pumping lines relative to nu1 (the input/output line).
    double offset_hz(int line) const;

    void validate() const;
};

// Returns the zero-field scheme: nu1 = 306263.0 GHz, nu2 = nu1 + 0.6547 GHz,
// nu3 = nu2 + 6.2594 GHz, nu4 = nu2 + 7.0762 GHz, nu_mw = 655 MHz.
LevelScheme default_scheme();

// 4x4 relative oscillator strengths, rows = ground states, columns =
// excited states. Rows (and columns) sum to 1 within measurement rounding.
struct StrengthTable {
    std::array<std::array<double, 4>, 4> rel;

    void validate() const;  // entries in [0,1], row sums within 0.02 of 1
};

StrengthTable default_strengths();

// Table lookup with 1-based indices matching the level labels.
double transition_strength(const StrengthTable& table, int g, int e);

// Rabi frequency scaling with the square root of the oscillator strength.
double scaled_rabi(double omega_ref_hz, double strength_ref,
                   double strength_target);

// Rabi frequency scaling with the square root of drive power.
double rabi_from_power(double p_watts, double omega_ref_hz, double p_ref_watts);

// The named transitions of the pumping scheme, (ground, excited) pairs:
// nu1 = (4,1), nu2 = (3,1), nu3 = (2,3), nu4 = (1,4).
struct NamedTransition {
    int ground;
    int excited;
};
NamedTransition pump_transition(int line);

}  // namespace afc
