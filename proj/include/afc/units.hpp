#pragma once

#include <cmath>

// Frequency convention: every public interface takes and returns ordinary
// frequencies in Hz (the way instrument settings and the usual Omega/2pi
// values are quoted). The 2*pi shows up only inside ODE kernels and
// analytic formulas that need angular rates.
namespace afc {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kLn2 = 0.693147180559945309417232121458176568;

constexpr double angular(double hz) { return kTwoPi * hz; }
constexpr double ordinary(double rad_per_s) { return rad_per_s / kTwoPi; }

// Intensity echo efficiency of a forward-recalled AFC is |c1|^2 e^{-c0}
// with |c1| <= c0, so it can never exceed max_x x^2 e^{-x} = 4 e^{-2},
// the ~54% reabsorption limit.
inline double forward_recall_bound() { return 4.0 * std::exp(-2.0); }

}  // namespace afc
