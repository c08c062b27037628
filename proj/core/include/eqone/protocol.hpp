#pragma once

// Monte Carlo simulation of the pump-precession-probe magnetometer: each shot
// prepares |J,J> along x, precesses about z by phi = omega * t1 and measures
// Jy projectively.
//
// Natural units throughout: hbar = 1, g * mu0 = 1, so the field is the Larmor
// angular frequency omega.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "eqone/angmom.hpp"
#include "eqone/rng.hpp"

namespace eqone::protocol {

struct ProtocolConfig {
  angmom::SpinQuantumNumber j{1};
  double omega = 0.0;
  /// Single-shot precession time; defaults to 1 / gamma.
  std::optional<double> t1;
  double gamma = 1.0;
  std::uint64_t n_spins = 1;
  std::uint64_t n_reps = 1;
  std::uint64_t seed = 0;

  double shot_time() const { return t1 ? *t1 : 1.0 / gamma; }
  double precession_angle() const { return omega * shot_time(); }
  /// Total precession time T = n_reps * t1.
  double total_time() const { return static_cast<double>(n_reps) * shot_time(); }
  std::uint64_t shots() const;

  /// Throws InputError if any invariant is violated.
  void validate() const;
};

struct ExecutionOptions {
  /// Worker threads; 0 selects the hardware concurrency. Results do not
  /// depend on this value.
  unsigned workers = 1;
};

struct CampaignResult {
  double mean_jy = 0.0;
  double sample_variance = 0.0;
  double omega_hat = 0.0;
  /// Standard error of omega_hat (delta method).
  double uncertainty = 0.0;
  std::uint64_t shots = 0;
  /// The mean hit +-J and the arcsin argument was clamped.
  bool saturated = false;

  friend bool operator==(const CampaignResult&, const CampaignResult&) = default;
};

/// Inverse-CDF sampler over Jy outcomes for one precession angle.
class ShotSampler {
 public:
  ShotSampler(const angmom::SpinSystem& system, double phi);

  /// Born probabilities for m = J, J-1, ..., -J.
  const std::vector<double>& probabilities() const { return probabilities_; }

  /// 2m of the outcome selected by a uniform u in [0, 1).
  int sample_two_m(double u) const {
    std::size_t k = 0;
    while (k + 1 < cdf_.size() && u >= cdf_[k]) ++k;
    return two_j_ - 2 * static_cast<int>(k);
  }

 private:
  int two_j_;
  std::vector<double> probabilities_;
  std::vector<double> cdf_;
};

/// Born probabilities of the Jy outcomes after precession by `phi`.
std::vector<double> outcome_probabilities(const angmom::SpinSystem& system, double phi);

/// One shot: the measured m for uniform number `shot` of `stream`.
double single_shot(const ShotSampler& sampler, const rng::CounterStream& stream, std::uint64_t shot);
double single_shot(const angmom::SpinSystem& system, const ProtocolConfig& config,
                   const rng::CounterStream& stream, std::uint64_t shot);

/// n_spins * n_reps shots drawn from stream (config.seed, campaign_index).
CampaignResult run_campaign(const angmom::SpinSystem& system, const ProtocolConfig& config,
                            std::uint64_t campaign_index = 0, ExecutionOptions exec = {});

struct SensitivityEstimate {
  /// Sample standard deviation of omega_hat across campaigns.
  double delta_omega = 0.0;
  /// Bootstrap standard error of delta_omega.
  double delta_omega_stderr = 0.0;
  double mean_omega_hat = 0.0;
  std::size_t campaigns = 0;
  std::size_t saturated_campaigns = 0;
};

inline constexpr std::size_t kMinCampaigns = 30;
inline constexpr std::size_t kBootstrapResamples = 200;

/// Runs `n_campaigns` independent campaigns (stream k for campaign k).
SensitivityEstimate sensitivity_mc(const angmom::SpinSystem& system, const ProtocolConfig& config,
                                   std::size_t n_campaigns, ExecutionOptions exec = {});

/// Bootstrap standard error of the sample standard deviation of `values`.
double bootstrap_stddev_error(const std::vector<double>& values, std::uint64_t seed,
                              std::size_t resamples = kBootstrapResamples);

}  // namespace eqone::protocol
