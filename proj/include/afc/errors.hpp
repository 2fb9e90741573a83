#pragma once

#include <stdexcept>
#include <string>

namespace afc {

// Adaptive step-size control failed; `time_s` is where it gave up.
class IntegrationFailure : public std::runtime_error {
  public:
    IntegrationFailure(const std::string& what, double time_s)
        : std::runtime_error(what + " (t = " + std::to_string(time_s) + " s)"),
          time_s(time_s) {}
    double time_s;
};

// Sampled profile too coarse for the requested spectral analysis.
class ResolutionError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Nonlinear fit did not reach the convergence tolerance; carries the
// best residual norm seen so the caller can judge how bad it is.
class FitNotConverged : public std::runtime_error {
  public:
    FitNotConverged(const std::string& what, double residual_norm)
        : std::runtime_error(what + " (residual norm " +
                             std::to_string(residual_norm) + ")"),
          residual_norm(residual_norm) {}
    double residual_norm;
};

// Storage sequence constraint violation; message names the inequality.
class SchedulingError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Scenario config problems, annotated with file line where possible.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace afc
