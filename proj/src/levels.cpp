#include "afc/levels.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace afc {

double LevelScheme::offset_hz(int line) const {
    switch (line) {
        case 1: return 0.0;
        case 2: return nu2_hz - nu1_hz;
        case 3: return nu3_hz - nu1_hz;
        case 4: return nu4_hz - nu1_hz;
    }
    throw std::invalid_argument("LevelScheme: line index must be 1..4");
}

void LevelScheme::validate() const {
    if (nu1_hz <= 0 || nu2_hz <= 0 || nu3_hz <= 0 || nu4_hz <= 0 ||
        nu_mw_hz <= 0)
        throw std::invalid_argument("LevelScheme: frequencies must be > 0");
    if (nu2_hz <= nu1_hz || nu3_hz <= nu2_hz || nu4_hz <= nu3_hz)
        throw std::invalid_argument("LevelScheme: expected nu1 < nu2 < nu3 < nu4");
}

LevelScheme default_scheme() {
    LevelScheme s{};
    s.nu1_hz = 306263.0e9;
    s.nu2_hz = s.nu1_hz + 0.6547e9;
    s.nu3_hz = s.nu2_hz + 6.2594e9;
    s.nu4_hz = s.nu2_hz + 7.0762e9;
    s.nu_mw_hz = 655.0e6;
    return s;
}

void StrengthTable::validate() const {
    for (int g = 0; g < 4; ++g) {
        double sum = 0.0;
        for (int e = 0; e < 4; ++e) {
            const double v = rel[g][e];
            if (v < 0.0 || v > 1.0)
                throw std::invalid_argument(
                    "StrengthTable: entries must be in [0,1]");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 0.02)
            throw std::invalid_argument(
                "StrengthTable: row " + std::to_string(g + 1) +
                " sums to " + std::to_string(sum) + ", expected 1.00 +- 0.02");
    }
}

StrengthTable default_strengths() {
    StrengthTable t{{{{0.15, 0.06, 0.08, 0.71},
                      {0.06, 0.19, 0.71, 0.04},
                      {0.07, 0.71, 0.16, 0.06},
                      {0.72, 0.04, 0.05, 0.19}}}};
    return t;
}

double transition_strength(const StrengthTable& table, int g, int e) {
    if (g < 1 || g > 4 || e < 1 || e > 4)
        throw std::invalid_argument(
            "transition_strength: indices must be in 1..4");
    return table.rel[g - 1][e - 1];
}

double scaled_rabi(double omega_ref_hz, double strength_ref,
                   double strength_target) {
    if (strength_ref <= 0.0 || strength_target <= 0.0)
        throw std::invalid_argument("scaled_rabi: strengths must be > 0");
    return omega_ref_hz * std::sqrt(strength_target / strength_ref);
}

double rabi_from_power(double p_watts, double omega_ref_hz,
                       double p_ref_watts) {
    if (p_watts <= 0.0 || p_ref_watts <= 0.0)
        throw std::invalid_argument("rabi_from_power: powers must be > 0");
    return omega_ref_hz * std::sqrt(p_watts / p_ref_watts);
}

NamedTransition pump_transition(int line) {
    switch (line) {
        case 1: return {4, 1};
        case 2: return {3, 1};
        case 3: return {2, 3};
        case 4: return {1, 4};
    }
    throw std::invalid_argument("pump_transition: line index must be 1..4");
}

}  // namespace afc
