#include "eqone/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "eqone/errors.hpp"
#include "eqone/parallel.hpp"

namespace eqone::protocol {
namespace {

__extension__ using Int128 = __int128;

constexpr std::uint64_t kShotsPerChunk = std::uint64_t{1} << 16;
constexpr std::uint64_t kBootstrapStream = 0xB0075742;

struct Tally {
  std::int64_t sum = 0;      // sum of 2m
  Int128 sum_squares = 0;    // sum of (2m)^2
};

// Shots [begin, end) with begin even.
Tally tally_shots(const ShotSampler& sampler, const rng::CounterStream& stream, std::uint64_t begin,
                  std::uint64_t end) {
  Tally t;
  std::uint64_t shot = begin;
  for (; shot + 1 < end; shot += 2) {
    const auto u = stream.block(shot >> 1);
    const int a = sampler.sample_two_m(u[0]);
    const int b = sampler.sample_two_m(u[1]);
    t.sum += a + b;
    t.sum_squares += a * a + b * b;
  }
  if (shot < end) {
    const int a = sampler.sample_two_m(stream.uniform(shot));
    t.sum += a;
    t.sum_squares += a * a;
  }
  return t;
}

double sample_stddev(const std::vector<double>& v) {
  const double n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (n - 1.0));
}

}  // namespace

std::uint64_t ProtocolConfig::shots() const {
  if (n_reps != 0 && n_spins > std::numeric_limits<std::uint64_t>::max() / n_reps) {
    throw InputError("n_spins * n_reps overflows");
  }
  return n_spins * n_reps;
}

void ProtocolConfig::validate() const {
  if (j.two_j() < 1) throw InputError("protocol requires J >= 1/2");
  if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InputError("gamma must be positive and finite");
  if (t1 && (!(*t1 > 0.0) || !std::isfinite(*t1))) throw InputError("t1 must be positive and finite");
  if (!std::isfinite(omega)) throw InputError("omega must be finite");
  if (n_spins < 1 || n_reps < 1) throw InputError("n_spins and n_reps must be positive");
  if (!(std::abs(precession_angle()) < std::numbers::pi / 2)) {
    throw InputError("|omega * t1| must be below pi/2 for the arcsin estimator (got " +
                     std::to_string(precession_angle()) + ")");
  }
  (void)shots();
}

std::vector<double> outcome_probabilities(const angmom::SpinSystem& system, double phi) {
  const auto start = angmom::max_projection_state(system, {1.0, 0.0, 0.0});
  const auto precessed = angmom::evolve(start, system.jz(), phi);
  return angmom::jy_outcome_probabilities(system, precessed);
}

ShotSampler::ShotSampler(const angmom::SpinSystem& system, double phi)
    : two_j_(system.spin().two_j()), probabilities_(outcome_probabilities(system, phi)) {
  cdf_.resize(probabilities_.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < probabilities_.size(); ++k) {
    acc += probabilities_[k];
    cdf_[k] = acc;
  }
  if (std::abs(acc - 1.0) > 1e-9) throw NumericError("Born probabilities do not sum to one");
  cdf_.back() = 1.0;
}

double single_shot(const ShotSampler& sampler, const rng::CounterStream& stream, std::uint64_t shot) {
  return 0.5 * sampler.sample_two_m(stream.uniform(shot));
}

double single_shot(const angmom::SpinSystem& system, const ProtocolConfig& config,
                   const rng::CounterStream& stream, std::uint64_t shot) {
  config.validate();
  if (config.j != system.spin()) throw InputError("config spin does not match the spin system");
  return single_shot(ShotSampler(system, config.precession_angle()), stream, shot);
}

CampaignResult run_campaign(const angmom::SpinSystem& system, const ProtocolConfig& config,
                            std::uint64_t campaign_index, ExecutionOptions exec) {
  config.validate();
  if (config.j != system.spin()) throw InputError("config spin does not match the spin system");
  const std::uint64_t n = config.shots();
  if (n < 2) throw InputError("a campaign needs at least two shots");

  const ShotSampler sampler(system, config.precession_angle());
  const rng::CounterStream stream(config.seed, campaign_index);

  const std::size_t chunks = static_cast<std::size_t>((n + kShotsPerChunk - 1) / kShotsPerChunk);
  std::vector<Tally> partial(chunks);
  parallel_for(chunks, exec.workers, [&](std::size_t c) {
    const std::uint64_t begin = c * kShotsPerChunk;
    partial[c] = tally_shots(sampler, stream, begin, std::min(n, begin + kShotsPerChunk));
  });
  Tally total;
  for (const Tally& t : partial) {
    total.sum += t.sum;
    total.sum_squares += t.sum_squares;
  }

  const double j = config.j.value();
  const double t1 = config.shot_time();
  const double shots = static_cast<double>(n);

  CampaignResult r;
  r.shots = n;
  r.mean_jy = static_cast<double>(total.sum) / (2.0 * shots);
  const Int128 centered = static_cast<Int128>(n) * total.sum_squares -
                          static_cast<Int128>(total.sum) * static_cast<Int128>(total.sum);
  r.sample_variance = static_cast<double>(static_cast<long double>(centered) /
                                          (4.0L * static_cast<long double>(n) * static_cast<long double>(n - 1)));

  double ratio = r.mean_jy / j;
  if (std::abs(ratio) >= 1.0) {
    r.saturated = true;
    ratio = std::clamp(ratio, -1.0, 1.0);
  }
  const double phi_hat = std::asin(ratio);
  r.omega_hat = phi_hat / t1;
  if (r.saturated) {
    // The arcsin branch carries no slope information; report the full branch width.
    r.uncertainty = (std::numbers::pi / 2) / t1;
  } else {
    const double cos_phi = std::cos(phi_hat);
    double per_shot = r.sample_variance;
    if (per_shot <= 0.0) per_shot = 0.5 * j * cos_phi * cos_phi;
    r.uncertainty = std::sqrt(per_shot) / (j * cos_phi * std::sqrt(shots)) / t1;
  }
  return r;
}

double bootstrap_stddev_error(const std::vector<double>& values, std::uint64_t seed, std::size_t resamples) {
  const std::size_t n = values.size();
  if (n < 2 || resamples < 2) throw InputError("bootstrap needs at least two values and two resamples");
  const rng::CounterStream stream(seed, kBootstrapStream);
  std::vector<double> stds(resamples);
  std::vector<double> draw(n);
  for (std::size_t r = 0; r < resamples; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      const double u = stream.uniform(static_cast<std::uint64_t>(r) * n + i);
      draw[i] = values[std::min(n - 1, static_cast<std::size_t>(u * static_cast<double>(n)))];
    }
    stds[r] = sample_stddev(draw);
  }
  return sample_stddev(stds);
}

SensitivityEstimate sensitivity_mc(const angmom::SpinSystem& system, const ProtocolConfig& config,
                                   std::size_t n_campaigns, ExecutionOptions exec) {
  if (n_campaigns < kMinCampaigns) {
    throw InputError("sensitivity estimate needs at least " + std::to_string(kMinCampaigns) + " campaigns");
  }
  config.validate();
  std::vector<CampaignResult> results(n_campaigns);
  parallel_for(n_campaigns, exec.workers, [&](std::size_t k) {
    results[k] = run_campaign(system, config, k, ExecutionOptions{1});
  });

  std::vector<double> omegas(n_campaigns);
  SensitivityEstimate est;
  est.campaigns = n_campaigns;
  for (std::size_t k = 0; k < n_campaigns; ++k) {
    omegas[k] = results[k].omega_hat;
    est.mean_omega_hat += omegas[k];
    if (results[k].saturated) ++est.saturated_campaigns;
  }
  est.mean_omega_hat /= static_cast<double>(n_campaigns);
  est.delta_omega = sample_stddev(omegas);
  est.delta_omega_stderr = bootstrap_stddev_error(omegas, rng::derive_seed(config.seed, kBootstrapStream));
  return est;
}

}  // namespace eqone::protocol
