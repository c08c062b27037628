// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "eqone/angmom.hpp"
#include "eqone/faraday.hpp"
#include "eqone/harness.hpp"
#include "eqone/limits.hpp"
#include "eqone/protocol.hpp"
#include "eqone/rng.hpp"
#include "oracle.hpp"

using namespace eqone;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

double max_abs(const angmom::OperatorMatrix& m) { return m.cwiseAbs().maxCoeff(); }

Outcome operator_algebra() {
  const auto start = std::chrono::steady_clock::now();
  const angmom::Complex i(0.0, 1.0);
  const angmom::Axis x{1.0, 0.0, 0.0};
  double worst = 0.0;
  for (int two_j = 1; two_j <= 20; ++two_j) {
    const auto s = angmom::build_spin_system(angmom::SpinQuantumNumber(two_j));
    const double j = 0.5 * two_j;
    const auto id = angmom::OperatorMatrix::Identity(two_j + 1, two_j + 1);
    const Eigen::VectorXcd psi0 = angmom::axis_eigenstate(s, x, 0).amplitudes();
    const Eigen::VectorXcd psi1 = angmom::axis_eigenstate(s, x, 1).amplitudes();
    const double defects[] = {
        max_abs(s.jx() * s.jy() - s.jy() * s.jx() - i * s.jz()),
        max_abs(s.jy() * s.jz() - s.jz() * s.jy() - i * s.jx()),
        max_abs(s.jz() * s.jx() - s.jx() * s.jz() - i * s.jy()),
        angmom::hermiticity_defect(s.jx()),
        angmom::hermiticity_defect(s.jy()),
        angmom::hermiticity_defect(s.jz()),
        max_abs(s.jx() * s.jx() + s.jy() * s.jy() + s.jz() * s.jz() - j * (j + 1) * id),
        max_abs(s.jplus() - (s.jx() + i * s.jy())),
        max_abs(s.jminus() - (s.jx() - i * s.jy())),
        std::abs(std::abs(psi1.dot(s.jz() * psi0)) - std::sqrt(j / 2.0)),
    };
    for (double d : defects) worst = std::max(worst, d);
  }
  const double t = seconds_since(start);
  return {worst <= 1e-10 && t < 5.0, fmt("max defect %.2e over J = 1/2..10, %.2f s", worst, t)};
}

Outcome born_rule() {
  const auto start = std::chrono::steady_clock::now();
  constexpr std::uint64_t kShots = 1000000;
  double worst_z = 0.0;
  for (int two_j = 1; two_j <= 6; ++two_j) {
    const auto s = angmom::build_spin_system(angmom::SpinQuantumNumber(two_j));
    for (double phi : {0.0, 0.1, 0.5}) {
      const auto expected = oracle::born_dense(two_j, phi);
      const protocol::ShotSampler sampler(s, phi);
      const rng::CounterStream stream(rng::derive_seed(0xACCE97, 16 * two_j + static_cast<int>(phi * 10)), 0);
      std::vector<std::uint64_t> counts(two_j + 1, 0);
      for (std::uint64_t k = 0; k < kShots; ++k) {
        const int two_m = sampler.sample_two_m(stream.uniform(k));
        ++counts[(two_j - two_m) / 2];
      }
      for (int k = 0; k <= two_j; ++k) {
        const double p = expected[k];
        const double sigma = std::sqrt(kShots * p * (1.0 - p));
        const double dev = std::abs(static_cast<double>(counts[k]) - kShots * p);
        worst_z = std::max(worst_z, sigma > 0.0 ? dev / sigma : (dev > 0.0 ? INFINITY : 0.0));
      }
    }
  }
  const double t = seconds_since(start);
  return {worst_z <= 4.0 && t < 60.0, fmt("worst deviation %.2f sigma over 18 cases, %.1f s", worst_z, t)};
}

Outcome scaling_law() {
  const auto start = std::chrono::steady_clock::now();
  constexpr std::size_t kCampaigns = 1000;
  protocol::ProtocolConfig base;
  base.j = angmom::SpinQuantumNumber(1);
  base.gamma = 1.0;
  base.omega = 0.0;
  base.seed = 0x5CA1E;

  auto sweep = [&](harness::SweptParameter p, std::vector<double> values, std::uint64_t n, std::uint64_t reps) {
    harness::SweepSpec spec;
    spec.parameter = p;
    spec.values = std::move(values);
    auto cfg = base;
    cfg.n_spins = n;
    cfg.n_reps = reps;
    spec.base = cfg;
    spec.campaigns_per_point = kCampaigns;
    spec.seed = base.seed + static_cast<std::uint64_t>(p);
    return harness::fit_power_law(harness::run_sweep(spec));
  };
  const auto fn = sweep(harness::SweptParameter::n_spins, {100, 316, 1000, 3162, 10000}, 100, 100);
  const auto ft = sweep(harness::SweptParameter::t_total, {10, 32, 100, 316, 1000}, 100, 10);
  const auto fg = sweep(harness::SweptParameter::gamma, {1, 3.2, 10, 31.6, 100}, 100, 10);

  constexpr std::size_t kJCampaigns = 4000;
  std::vector<double> scaled;
  for (int two_j = 1; two_j <= 4; ++two_j) {
    auto cfg = base;
    cfg.j = angmom::SpinQuantumNumber(two_j);
    cfg.n_spins = 100;
    cfg.n_reps = 100;
    cfg.seed = rng::derive_seed(base.seed, 100 + two_j);
    const auto s = angmom::build_spin_system(cfg.j);
    scaled.push_back(protocol::sensitivity_mc(s, cfg, kJCampaigns).delta_omega * std::sqrt(two_j));
  }
  const double mean = std::accumulate(scaled.begin(), scaled.end(), 0.0) / scaled.size();
  double prefactor_dev = 0.0;
  for (double v : scaled) prefactor_dev = std::max(prefactor_dev, std::abs(v / mean - 1.0));

  const bool pass = std::abs(fn.exponent + 0.5) <= 0.03 && std::abs(ft.exponent + 0.5) <= 0.03 &&
                    std::abs(fg.exponent - 0.5) <= 0.03 && prefactor_dev <= 0.05;
  const double t = seconds_since(start);
  return {pass && t < 600.0,
          fmt("exponents N %.4f, T %.4f, Gamma %.4f; sqrt(2J) law max dev %.2f%%; %.0f s", fn.exponent,
              ft.exponent, fg.exponent, 100.0 * prefactor_dev, t)};
}

Outcome absolute_level() {
  protocol::ProtocolConfig cfg;
  cfg.j = angmom::SpinQuantumNumber(1);
  cfg.gamma = 1.0;
  cfg.omega = 0.0;
  cfg.n_spins = 100;
  cfg.n_reps = 10000;
  cfg.seed = 0xAB501;
  constexpr std::size_t kCampaigns = 2500;
  const auto s = angmom::build_spin_system(cfg.j);
  const auto est = protocol::sensitivity_mc(s, cfg, kCampaigns);
  const double shots = static_cast<double>(cfg.shots());
  const double oracle_value = oracle::delta_omega_delta_method(0.5, cfg.shot_time(), shots);
  limits::SensorParams p;
  p.j = cfg.j;
  p.gamma = cfg.gamma;
  p.n = static_cast<double>(cfg.n_spins);
  p.t = cfg.total_time();
  const double r_oracle = est.delta_omega / oracle_value;
  const double r_formula = est.delta_omega / limits::delta_b(p);
  return {r_oracle >= 0.95 && r_oracle <= 1.05 && r_formula >= 0.5 && r_formula <= 2.0,
          fmt("MC/oracle %.4f, MC/formula %.4f (%zu campaigns of %.0f shots)", r_oracle, r_formula, kCampaigns,
              shots)};
}

Outcome faraday_optimum() {
  faraday::OpticalMedium m;
  m.n_atoms = 1000000;
  const double x_opt = faraday::optimize_optical_depth(m);
  const double at_two = faraday::evaluate(m, 1.0, 2.0).delta_b_scaled;
  double worst = INFINITY;
  for (int i = 1; i <= 500; ++i) {
    const double x = 20.0 * i / 500.0;
    worst = std::min(worst, faraday::evaluate(m, 1.0, x).delta_b_scaled / at_two - 1.0);
  }
  return {std::abs(x_opt - 2.0) <= 1e-3 && worst >= 0.0,
          fmt("x* = %.6f; min dB(x)/dB(2) - 1 on grid = %.3e", x_opt, worst)};
}

Outcome equivalence() {
  std::mt19937_64 gen(0xE0E0);
  std::uniform_real_distribution<double> log_u(-3.0, 3.0);
  double lo = INFINITY, hi = 0.0;
  for (int i = 0; i < 100; ++i) {
    faraday::OpticalMedium m;
    m.n_atoms = static_cast<std::uint64_t>(std::llround(std::pow(10.0, 4.0 + log_u(gen))));
    m.gamma = std::pow(10.0, log_u(gen));
    const double t = std::pow(10.0, log_u(gen));
    limits::SensorParams p;
    p.n = static_cast<double>(m.n_atoms);
    p.gamma = m.gamma;
    p.t = t;
    const double r = faraday::evaluate(m, t, 2.0).delta_b_scaled / limits::delta_b(p);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  const double analytic_spread = hi / lo - 1.0;

  protocol::ProtocolConfig spin;
  spin.j = angmom::SpinQuantumNumber(1);
  spin.gamma = 1.0;
  spin.n_spins = 100;
  spin.n_reps = 100;
  spin.seed = 0xE9;
  harness::FaradayBase optical;
  optical.medium.n_atoms = spin.n_spins;
  optical.medium.gamma = spin.gamma;
  optical.t = spin.total_time();
  const auto report = harness::equivalence_report(spin, optical, 200);
  double mc_lo = INFINITY, mc_hi = 0.0;
  for (const auto& pt : report.points) {
    mc_lo = std::min(mc_lo, pt.mc_over_formula);
    mc_hi = std::max(mc_hi, pt.mc_over_formula);
  }
  const bool pass = analytic_spread <= 1e-9 && mc_lo >= 0.5 && mc_hi <= 2.0 && report.points.size() == 5;
  return {pass, fmt("Faraday/formula = %.6f, spread %.1e over 100 triples; MC/formula in [%.3f, %.3f] on %zu triples",
                    lo, analytic_spread, mc_lo, mc_hi, report.points.size())};
}

Outcome detuning() {
  constexpr int kPoints = 10000;
  bool decreasing = true;
  double prev = faraday::detuned_snr_relative(0.0);
  for (int i = 1; i < kPoints; ++i) {
    const double v = faraday::detuned_snr_relative(1000.0 * i / (kPoints - 1));
    decreasing = decreasing && v < prev;
    prev = v;
  }
  const double tail = faraday::detuned_snr_relative(1000.0) * 1000.0;
  return {decreasing && std::abs(tail - 1.0) <= 0.01,
          fmt("strictly decreasing on %d points: %s; value * delta at 1e3 = %.8f", kPoints, decreasing ? "yes" : "no",
              tail)};
}

Outcome determinism() {
  const std::vector<std::vector<std::string>> commands{
      {"formula", "--j", "1.5", "--e-field", "3", "--t1", "0.5", "--b", "0.2"},
      {"simulate", "--j", "0.5", "--omega", "0", "--n", "1000", "--reps", "1000", "--seed", "7"},
      {"simulate", "--j", "2", "--omega", "0.02", "--n", "100", "--reps", "100", "--campaigns", "60"},
      {"sweep", "--model", "mc", "--param", "n_spins", "--from", "10", "--to", "1000", "--points", "5",
       "--campaigns", "40", "--reps", "20"},
      {"--format", "json", "sweep", "--model", "faraday", "--param", "optical_depth", "--values", "0.5,1,2,4,8"},
      {"faraday", "--scan", "--points", "100"},
      {"optimize", "--doppler", "50"},
      {"equivalence", "--campaigns", "40", "--n", "50", "--reps", "20"},
      {"--units", "si", "simulate", "--b", "1e-13", "--n", "100", "--reps", "1000"},
  };
  std::size_t identical = 0;
  for (const auto& args : commands) {
    std::string reference;
    bool same = true;
    for (const char* workers : {"1", "1", "4", "0"}) {
      auto full = args;
      full.insert(full.begin(), {"--workers", workers});
      std::ostringstream out, err;
      const int code = cli::parse_and_dispatch(full, out, err);
      if (code != 0) same = false;
      if (reference.empty()) reference = out.str();
      same = same && out.str() == reference && !reference.empty();
    }
    identical += same ? 1 : 0;
  }
  return {identical == commands.size(),
          fmt("%zu/%zu commands byte-identical across repeats and workers {1, 4, all}", identical, commands.size())};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "operator algebra", operator_algebra},
      {2, "Born-rule sampler vs dense oracle", born_rule},
      {3, "Monte Carlo scaling exponents and sqrt(2J) law", scaling_law},
      {4, "Monte Carlo absolute level", absolute_level},
      {5, "Faraday optimal optical depth", faraday_optimum},
      {6, "Faraday / formula / Monte Carlo equivalence", equivalence},
      {7, "detuning monotonicity", detuning},
      {8, "CLI determinism", determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("[%s] criterion %d: %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
