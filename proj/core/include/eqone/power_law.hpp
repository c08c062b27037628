#pragma once

#include <cstddef>
#include <span>

namespace eqone::harness {

/// y = exp(log_prefactor) * x^exponent, fitted in log-log space.
struct PowerLawFit {
  double exponent = 0.0;
  double exponent_stderr = 0.0;
  double log_prefactor = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

inline constexpr std::size_t kMinFitPoints = 4;

/// Least squares on (log x, log y). Unweighted unless `weighted`, in which
/// case point i gets weight (y_i / y_err_i)^2. Needs at least four points,
/// all strictly positive.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y,
                          std::span<const double> y_err = {}, bool weighted = false);

}  // namespace eqone::harness
