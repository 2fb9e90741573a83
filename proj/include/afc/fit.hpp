#pragma once

#include <span>
#include <string>
#include <vector>

// Nonlinear least squares for the small model zoo used by the decay and
// linewidth analyses: single/double exponentials and the Gaussian
// rephasing-mismatch profile. Damped Gauss-Newton with analytic
// Jacobians; timescales and linewidths are fitted in log space so they
// stay positive.
namespace afc {

struct FitParam {
    std::string name;
    double value = 0.0;
    double sigma = 0.0;  // Jacobian-based 1-sigma estimate, approximate
};

struct FitResult {
    std::vector<FitParam> params;
    double residual_norm = 0.0;
    bool converged = false;
    int iterations = 0;
    bool identifiability_warning = false;
    std::string message;

    double value(const std::string& name) const;
    double sigma(const std::string& name) const;
};

// y = A exp(-t/T). Initialized by log-linear regression.
FitResult fit_exp(std::span<const double> t, std::span<const double> y,
                  std::span<const double> sigma = {});

// y = A1 exp(-t/T1) + A2 exp(-t/T2), reported with T1 < T2. Warns when
// T2/T1 < 3 (components barely separable).
FitResult fit_double_exp(std::span<const double> t, std::span<const double> y,
                         std::span<const double> sigma = {});

// y = A exp(-pi^2 Gamma^2 x^2 / (2 ln 2)), the spin rephasing mismatch
// profile; Gamma is the inhomogeneous FWHM in the units of 1/x.
FitResult fit_gaussian_mismatch(std::span<const double> x,
                                std::span<const double> y,
                                std::span<const double> sigma = {});

// Dominant oscillation frequency from interpolated zero crossings of
// y(t) about its midline. Needs at least two crossings.
double dominant_frequency(std::span<const double> t, std::span<const double> y);

}  // namespace afc
