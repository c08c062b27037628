#include "eqone/faraday.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "eqone/golden_section.hpp"

namespace eqone::faraday {
namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw InputError(std::string(name) + " must be non-negative and finite");
}

double lineshape_factor(const OpticalMedium& m) {
  const double delta = m.detuning / m.gamma;
  return 1.0 / (1.0 + delta * delta);
}

}  // namespace

void OpticalMedium::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InputError("gamma must be positive and finite");
  require_nonnegative(optical_depth, "optical_depth");
  require_nonnegative(doppler_width, "doppler_width");
  require_nonnegative(saturation, "saturation");
  if (saturation > 1.0) {
    throw InputError("saturation parameters above 1 (bleaching regime) are not modeled");
  }
  if (!std::isfinite(detuning)) throw InputError("detuning must be finite");
}

double rotation_angle(const OpticalMedium& m, double omega) {
  m.validate();
  if (!std::isfinite(omega)) throw InputError("omega must be finite");
  const double ratio = omega / m.gamma;
  if (std::abs(ratio) > kLinearRegimeLimit) {
    throw LinearRegimeError("|omega / gamma| = " + std::to_string(std::abs(ratio)) +
                            " is outside the linear rotation regime");
  }
  return ratio * m.optical_depth;
}

bool near_linear_limit(const OpticalMedium& m, double omega) {
  const double ratio = std::abs(omega / m.gamma);
  return ratio > kLinearRegimeWarning && ratio <= kLinearRegimeLimit;
}

double photon_budget(const OpticalMedium& m, double t) {
  m.validate();
  if (!(t > 0.0) || !std::isfinite(t)) throw InputError("measurement time must be positive");
  return m.saturation * static_cast<double>(m.n_atoms) * m.gamma * t;
}

double polarimeter_noise(double n_photons) {
  if (!(n_photons > 0.0)) return kInfinity;
  return 1.0 / (2.0 * std::sqrt(n_photons));
}

double doppler_penalty(double gamma, double gamma_d) {
  if (!(gamma > 0.0) || !(gamma_d > 0.0) || !std::isfinite(gamma) || !std::isfinite(gamma_d)) {
    throw InputError("Doppler penalty needs positive rates");
  }
  return std::min(1.0, gamma / gamma_d);
}

double detuned_snr_relative(double delta_over_gamma) {
  if (!(delta_over_gamma >= 0.0) || !std::isfinite(delta_over_gamma)) {
    throw InputError("detuning ratio must be non-negative and finite");
  }
  return 1.0 / std::hypot(1.0, delta_over_gamma);
}

FaradayResult evaluate(const OpticalMedium& m, double t, double optical_depth, double omega) {
  OpticalMedium at = m;
  at.optical_depth = optical_depth;
  const double lineshape = lineshape_factor(at);
  const double doppler = at.doppler_width > 0.0 ? doppler_penalty(at.gamma, at.doppler_width) : 1.0;
  // d(phi)/d(omega)
  const double slope = at.optical_depth / at.gamma * doppler * lineshape;

  FaradayResult r;
  r.optical_depth = optical_depth;
  r.rotation_angle = rotation_angle(at, omega) * doppler * lineshape;
  r.n_photons = photon_budget(at, t) * std::exp(2.0 - optical_depth) / lineshape;
  r.delta_phi = polarimeter_noise(r.n_photons);
  r.delta_phi_infinite = std::isinf(r.delta_phi);
  if (r.delta_phi_infinite || slope == 0.0) {
    r.delta_b_infinite = true;
    r.delta_b_scaled = kInfinity;
    r.snr = 0.0;
  } else {
    r.delta_b_scaled = r.delta_phi / slope;
    r.snr = 1.0 / r.delta_b_scaled;
  }
  return r;
}

FaradaySensitivity magnetometer_sensitivity(const OpticalMedium& m, double t, double omega) {
  return {evaluate(m, t, m.optical_depth, omega), evaluate(m, t, 2.0, omega)};
}

double optimize_optical_depth(const OpticalMedium& m, double t) {
  m.validate();
  OpticalMedium shape = m;
  if (photon_budget(m, t) == 0.0) {
    // The argmax does not depend on the photon scale.
    shape.n_atoms = 1;
    shape.saturation = 1.0;
  }
  const auto optimum = golden_section_maximize(
      [&](double x) { return evaluate(shape, t, x).snr; }, kOptimalDepthLow, kOptimalDepthHigh, 1e-10);
  return optimum.x;
}

std::vector<FaradayResult> scan_optical_depth(const OpticalMedium& m, double t, const std::vector<double>& depths) {
  std::vector<FaradayResult> out;
  out.reserve(depths.size());
  for (double x : depths) out.push_back(evaluate(m, t, x));
  return out;
}

}  // namespace eqone::faraday
