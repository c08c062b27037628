#include "eqone/power_law.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "eqone/errors.hpp"

namespace eqone::harness {

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y, std::span<const double> y_err,
                          bool weighted) {
  const std::size_t n = x.size();
  if (y.size() != n) throw InputError("x and y have different lengths");
  if (n < kMinFitPoints) {
    throw InputError("power-law fit needs at least " + std::to_string(kMinFitPoints) + " points, got " +
                     std::to_string(n));
  }
  if (weighted && y_err.size() != n) throw InputError("weighted fit needs one error per point");

  std::vector<double> lx(n), ly(n), w(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw InputError("power-law fit needs strictly positive, finite data");
    }
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    if (weighted) {
      if (!(y_err[i] > 0.0)) throw InputError("weighted fit needs positive errors");
      const double rel = y_err[i] / y[i];
      w[i] = 1.0 / (rel * rel);
    }
  }

  double sw = 0.0, mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sw += w[i];
    mx += w[i] * lx[i];
    my += w[i] * ly[i];
  }
  mx /= sw;
  my /= sw;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += w[i] * (lx[i] - mx) * (lx[i] - mx);
    sxy += w[i] * (lx[i] - mx) * (ly[i] - my);
    syy += w[i] * (ly[i] - my) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw InputError("power-law fit needs at least two distinct x values");

  PowerLawFit fit;
  fit.points = n;
  fit.exponent = sxy / sxx;
  fit.log_prefactor = my - fit.exponent * mx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ly[i] - (fit.log_prefactor + fit.exponent * lx[i]);
    ssr += w[i] * r * r;
  }
  fit.exponent_stderr = std::sqrt(ssr / static_cast<double>(n - 2) / sxx);
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
  return fit;
}

}  // namespace eqone::harness
