#pragma once

// Shot-noise-limited linear Faraday-rotation (Macaluso-Corbino) magnetometer
// on an isolated J = 0 -> J' = 1 transition.
//
// Model, natural units (hbar = g mu0 = 1, field == Larmor frequency omega):
//   rotation        phi    = (omega / Gamma) * x * D * L
//   transmitted     N_ph   = kappa * N * Gamma * t * exp(2 - x) * (1 + delta^2)
//   polarimeter     dphi   = 1 / (2 sqrt(N_ph))
//   sensitivity     domega = dphi / (dphi/domega)
// with x the optical depth l/l0, D = min(1, Gamma / Gamma_D) the Doppler
// penalty, delta = Delta / Gamma and L = 1 / (1 + delta^2). The photon count
// is normalized so that N_ph = N Gamma t at x = 2, resonance and kappa = 1.

#include <cstdint>
#include <vector>

#include "eqone/errors.hpp"

namespace eqone::faraday {

/// Field outside the linear-rotation regime (|omega / Gamma| > 0.3).
class LinearRegimeError : public InputError {
 public:
  using InputError::InputError;
};

inline constexpr double kLinearRegimeLimit = 0.3;
inline constexpr double kLinearRegimeWarning = 0.1;
inline constexpr double kOptimalDepthLow = 1e-6;
inline constexpr double kOptimalDepthHigh = 50.0;

struct OpticalMedium {
  /// Natural linewidth Gamma.
  double gamma = 1.0;
  /// x = l / l0.
  double optical_depth = 2.0;
  std::uint64_t n_atoms = 1;
  /// Gamma_D; zero disables the Doppler penalty.
  double doppler_width = 0.0;
  /// kappa in [0, 1]; the bleaching regime above unity is not modeled.
  double saturation = 1.0;
  /// Delta, same units as gamma.
  double detuning = 0.0;

  void validate() const;
};

struct FaradayResult {
  double optical_depth = 0.0;
  double rotation_angle = 0.0;
  double n_photons = 0.0;
  double delta_phi = 0.0;
  double delta_b_scaled = 0.0;
  /// Signal-to-noise ratio at unit Larmor frequency, 1 / delta_b_scaled.
  double snr = 0.0;
  bool delta_phi_infinite = false;
  bool delta_b_infinite = false;
};

struct FaradaySensitivity {
  FaradayResult at_depth;
  /// Same medium at x = 2.
  FaradayResult at_optimum;
};

/// (omega / Gamma) * x. Throws LinearRegimeError when |omega / Gamma| > 0.3.
double rotation_angle(const OpticalMedium& m, double omega);

/// True when 0.1 < |omega / Gamma| <= 0.3.
bool near_linear_limit(const OpticalMedium& m, double omega);

/// kappa * N * Gamma * t, the transmitted photon count at x = 2.
double photon_budget(const OpticalMedium& m, double t);

/// 1 / (2 sqrt(n)); +infinity when n <= 0.
double polarimeter_noise(double n_photons);

/// min(1, Gamma / Gamma_D). Both rates must be positive.
double doppler_penalty(double gamma, double gamma_d);

/// 1 / sqrt(1 + delta^2), delta = Delta / Gamma >= 0.
double detuned_snr_relative(double delta_over_gamma);

/// Evaluates the model at the medium's optical depth (and at x = 2).
/// `omega` only sets the reported rotation angle.
FaradaySensitivity magnetometer_sensitivity(const OpticalMedium& m, double t, double omega = 0.0);

/// Model evaluated at an explicit optical depth.
FaradayResult evaluate(const OpticalMedium& m, double t, double optical_depth, double omega = 0.0);

/// Optical depth maximizing the single-pass SNR, searched on [1e-6, 50].
double optimize_optical_depth(const OpticalMedium& m, double t = 1.0);

/// evaluate() at each depth in `depths`.
std::vector<FaradayResult> scan_optical_depth(const OpticalMedium& m, double t, const std::vector<double>& depths);

}  // namespace eqone::faraday
