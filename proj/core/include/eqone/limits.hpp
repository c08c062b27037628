#pragma once

// Closed-form spin-projection-noise limits. All order-unity coefficients are
// exactly one; callers supply hbar, g and mu0 in whatever unit system they
// use (hbar = g = mu0 = 1 in natural units).

#include <optional>

#include "eqone/angmom.hpp"

namespace eqone::limits {

struct SensorParams {
  double g = 1.0;
  double mu0 = 1.0;
  double hbar = 1.0;
  angmom::SpinQuantumNumber j{1};
  double gamma = 1.0;
  double n = 1.0;
  double t = 1.0;
  /// Effective electric field; only needed for the EDM limit.
  std::optional<double> e_field;

  /// Throws InputError unless every quantity is positive and finite.
  void validate() const;
};

/// dB = hbar / (g mu0 sqrt(2J)) * sqrt(Gamma / (N T))
double delta_b(const SensorParams& p);

/// dd = hbar sqrt(J/2) / E * sqrt(Gamma / (N T))
double delta_d(const SensorParams& p);

/// Repeated single-spin measurement: hbar / (g mu0) / t1 * sqrt(t1 / T).
/// Requires 0 < t1 <= T. Does not include the N^(-1/2) ensemble factor.
double delta_b_single_spin(const SensorParams& p, double t1);

/// Single-shot signal-to-noise, (g mu0 B / hbar) sqrt(2J) / Gamma.
double snr_single(const SensorParams& p, double b);

/// snr_single * sqrt(N T Gamma).
double snr_ensemble(const SensorParams& p, double b);

/// Field at which snr_ensemble equals one.
double unit_snr_field(const SensorParams& p);

}  // namespace eqone::limits
