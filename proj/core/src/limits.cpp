#include "eqone/limits.hpp"

#include <cmath>
#include <string>

#include "eqone/errors.hpp"

namespace eqone::limits {
namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InputError(std::string(name) + " must be positive and finite");
  }
}

double rate_factor(const SensorParams& p) { return std::sqrt(p.gamma / (p.n * p.t)); }

}  // namespace

void SensorParams::validate() const {
  require_positive(g, "g");
  require_positive(mu0, "mu0");
  require_positive(hbar, "hbar");
  require_positive(gamma, "gamma");
  require_positive(n, "n");
  require_positive(t, "t");
  if (j.two_j() < 1) throw InputError("J must be at least 1/2");
  if (e_field) require_positive(*e_field, "e_field");
}

double delta_b(const SensorParams& p) {
  p.validate();
  return p.hbar / (p.g * p.mu0 * std::sqrt(2.0 * p.j.value())) * rate_factor(p);
}

double delta_d(const SensorParams& p) {
  p.validate();
  if (!p.e_field) throw InputError("the EDM limit needs an electric field");
  return p.hbar * std::sqrt(0.5 * p.j.value()) / *p.e_field * rate_factor(p);
}

double delta_b_single_spin(const SensorParams& p, double t1) {
  p.validate();
  require_positive(t1, "t1");
  if (t1 > p.t) throw InputError("t1 must not exceed the total time T");
  return p.hbar / (p.g * p.mu0) / t1 * std::sqrt(t1 / p.t);
}

double snr_single(const SensorParams& p, double b) {
  p.validate();
  return p.g * p.mu0 * b / p.hbar * std::sqrt(2.0 * p.j.value()) / p.gamma;
}

double snr_ensemble(const SensorParams& p, double b) {
  return snr_single(p, b) * std::sqrt(p.n * p.t * p.gamma);
}

double unit_snr_field(const SensorParams& p) { return 1.0 / snr_ensemble(p, 1.0); }

}  // namespace eqone::limits
