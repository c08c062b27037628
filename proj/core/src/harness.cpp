#include "eqone/harness.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "eqone/errors.hpp"

namespace eqone::harness {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::uint64_t as_count(double v, const char* what) {
  const double r = std::round(v);
  if (!(r >= 1.0) || std::abs(v - r) > 1e-9 * std::max(1.0, r) || r > 1e18) {
    throw InputError(std::string(what) + " must be a positive integer, got " + std::to_string(v));
  }
  return static_cast<std::uint64_t>(r);
}

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)); }

double spread(const std::vector<EquivalencePoint>& pts, double EquivalencePoint::*field) {
  double lo = pts.front().*field, hi = lo;
  for (const auto& p : pts) {
    lo = std::min(lo, p.*field);
    hi = std::max(hi, p.*field);
  }
  return hi / lo - 1.0;
}

SweepRow mc_point(const protocol::ProtocolConfig& base, SweptParameter param, double value,
                  std::size_t campaigns, std::uint64_t seed, protocol::ExecutionOptions exec) {
  protocol::ProtocolConfig cfg = base;
  cfg.seed = seed;
  switch (param) {
    case SweptParameter::n_spins:
      cfg.n_spins = as_count(value, "n_spins");
      break;
    case SweptParameter::t_total:
      cfg.n_reps = as_count(value / cfg.shot_time(), "t_total / t1");
      break;
    case SweptParameter::gamma: {
      const double total = base.total_time();
      cfg.gamma = value;
      cfg.t1.reset();
      cfg.n_reps = as_count(total * value, "t_total * gamma");
      break;
    }
    case SweptParameter::spin_j:
      cfg.j = angmom::SpinQuantumNumber::from_real(value);
      break;
    default:
      throw InputError(std::string("the Monte Carlo model cannot sweep ") + std::string(to_string(param)));
  }
  const auto system = angmom::build_spin_system(cfg.j);
  const auto est = protocol::sensitivity_mc(system, cfg, campaigns, exec);
  return {value, est.delta_omega, est.delta_omega_stderr, true, {}};
}

SweepRow faraday_point(const FaradayBase& base, SweptParameter param, double value) {
  FaradayBase b = base;
  switch (param) {
    case SweptParameter::n_spins:
      b.medium.n_atoms = as_count(value, "n_atoms");
      break;
    case SweptParameter::t_total:
      b.t = value;
      break;
    case SweptParameter::gamma:
      b.medium.gamma = value;
      break;
    case SweptParameter::optical_depth:
      b.medium.optical_depth = value;
      break;
    case SweptParameter::detuning:
      b.medium.detuning = value;
      break;
    default:
      throw InputError(std::string("the Faraday model cannot sweep ") + std::string(to_string(param)));
  }
  const auto r = faraday::magnetometer_sensitivity(b.medium, b.t).at_depth;
  if (r.delta_b_infinite) throw NumericError("no Faraday signal at this point");
  return {value, r.delta_b_scaled, 0.0, true, {}};
}

SweepRow formula_point(const limits::SensorParams& base, SweptParameter param, double value) {
  limits::SensorParams p = base;
  switch (param) {
    case SweptParameter::n_spins:
      p.n = value;
      break;
    case SweptParameter::t_total:
      p.t = value;
      break;
    case SweptParameter::gamma:
      p.gamma = value;
      break;
    case SweptParameter::spin_j:
      p.j = angmom::SpinQuantumNumber::from_real(value);
      break;
    default:
      throw InputError(std::string("the closed-form model cannot sweep ") + std::string(to_string(param)));
  }
  return {value, limits::delta_b(p), 0.0, true, {}};
}

}  // namespace

std::string_view to_string(SweptParameter p) {
  switch (p) {
    case SweptParameter::n_spins: return "n_spins";
    case SweptParameter::t_total: return "t_total";
    case SweptParameter::gamma: return "gamma";
    case SweptParameter::spin_j: return "spin_j";
    case SweptParameter::optical_depth: return "optical_depth";
    case SweptParameter::detuning: return "detuning";
  }
  return "unknown";
}

SweptParameter parse_swept_parameter(std::string_view name) {
  for (auto p : {SweptParameter::n_spins, SweptParameter::t_total, SweptParameter::gamma, SweptParameter::spin_j,
                 SweptParameter::optical_depth, SweptParameter::detuning}) {
    if (to_string(p) == name) return p;
  }
  throw InputError("unknown sweep parameter '" + std::string(name) + "'");
}

void SweepSpec::validate() const {
  if (values.empty()) throw InputError("sweep has no values");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) throw InputError("sweep values must be positive");
    if (i > 0 && !(values[i] > values[i - 1])) throw InputError("sweep values must be strictly increasing");
  }
  if (std::holds_alternative<protocol::ProtocolConfig>(base) && campaigns_per_point < protocol::kMinCampaigns) {
    throw InputError("Monte Carlo sweeps need at least " + std::to_string(protocol::kMinCampaigns) +
                     " campaigns per point");
  }
}

SweepResult run_sweep(const SweepSpec& spec, protocol::ExecutionOptions exec) {
  spec.validate();
  SweepResult result;
  result.parameter = spec.parameter;
  result.rows.reserve(spec.values.size());
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    const double value = spec.values[i];
    try {
      result.rows.push_back(std::visit(
          Overloaded{
              [&](const protocol::ProtocolConfig& c) {
                return mc_point(c, spec.parameter, value, spec.campaigns_per_point, rng::derive_seed(spec.seed, i),
                                exec);
              },
              [&](const FaradayBase& b) { return faraday_point(b, spec.parameter, value); },
              [&](const limits::SensorParams& p) { return formula_point(p, spec.parameter, value); },
          },
          spec.base));
    } catch (const InputError& e) {
      result.rows.push_back({value, 0.0, 0.0, false, e.what()});
    } catch (const NumericError& e) {
      result.rows.push_back({value, 0.0, 0.0, false, e.what()});
    }
  }
  return result;
}

PowerLawFit fit_power_law(const SweepResult& table, bool weighted) {
  std::vector<double> x, y, err;
  for (const auto& row : table.rows) {
    if (!row.ok) continue;
    x.push_back(row.param);
    y.push_back(row.delta_b);
    err.push_back(row.delta_b_err);
  }
  return fit_power_law(x, y, err, weighted);
}

protocol::ProtocolConfig rescale(const protocol::ProtocolConfig& cfg, TripleScale scale) {
  protocol::ProtocolConfig out = cfg;
  out.n_spins = cfg.n_spins * scale.n;
  out.gamma = cfg.gamma * static_cast<double>(scale.gamma);
  if (cfg.t1) out.t1 = *cfg.t1 / static_cast<double>(scale.gamma);
  out.omega = cfg.omega * static_cast<double>(scale.gamma);
  out.n_reps = cfg.n_reps * scale.gamma * scale.t;
  return out;
}

EquivalenceReport equivalence_report(const protocol::ProtocolConfig& spin_cfg, const FaradayBase& optical_cfg,
                                     std::size_t campaigns, protocol::ExecutionOptions exec) {
  spin_cfg.validate();
  optical_cfg.medium.validate();
  if (spin_cfg.n_spins != optical_cfg.medium.n_atoms || !close(spin_cfg.gamma, optical_cfg.medium.gamma, 1e-12) ||
      !close(spin_cfg.total_time(), optical_cfg.t, 1e-9)) {
    throw InputError("spin and optical configurations must share N, gamma and T");
  }
  const auto system = angmom::build_spin_system(spin_cfg.j);

  EquivalenceReport report;
  std::uint64_t index = 0;
  for (const TripleScale& s : kEquivalenceScales) {
    protocol::ProtocolConfig cfg = rescale(spin_cfg, s);
    cfg.seed = rng::derive_seed(spin_cfg.seed, index++);

    FaradayBase optical = optical_cfg;
    optical.medium.n_atoms = cfg.n_spins;
    optical.medium.gamma = cfg.gamma;
    optical.medium.detuning = optical_cfg.medium.detuning * static_cast<double>(s.gamma);
    optical.medium.doppler_width = optical_cfg.medium.doppler_width * static_cast<double>(s.gamma);
    optical.t = cfg.total_time();

    limits::SensorParams params;
    params.j = cfg.j;
    params.gamma = cfg.gamma;
    params.n = static_cast<double>(cfg.n_spins);
    params.t = cfg.total_time();

    EquivalencePoint p;
    p.n = params.n;
    p.gamma = params.gamma;
    p.t = params.t;
    const auto mc = protocol::sensitivity_mc(system, cfg, campaigns, exec);
    p.delta_b_mc = mc.delta_omega;
    p.delta_b_mc_err = mc.delta_omega_stderr;
    const auto far = faraday::magnetometer_sensitivity(optical.medium, optical.t).at_optimum;
    if (far.delta_b_infinite) throw NumericError("Faraday model has no signal for this configuration");
    p.delta_b_faraday = far.delta_b_scaled;
    p.delta_b_formula = limits::delta_b(params);
    p.faraday_over_formula = p.delta_b_faraday / p.delta_b_formula;
    p.mc_over_formula = p.delta_b_mc / p.delta_b_formula;
    p.mc_over_faraday = p.delta_b_mc / p.delta_b_faraday;
    report.points.push_back(p);
  }
  report.faraday_ratio_spread = spread(report.points, &EquivalencePoint::faraday_over_formula);
  report.mc_ratio_spread = spread(report.points, &EquivalencePoint::mc_over_formula);
  report.mc_faraday_ratio_spread = spread(report.points, &EquivalencePoint::mc_over_faraday);
  report.ratios_stable = report.faraday_ratio_spread <= kRatioStabilityBand &&
                         report.mc_ratio_spread <= kRatioStabilityBand &&
                         report.mc_faraday_ratio_spread <= kRatioStabilityBand;
  return report;
}

}  // namespace eqone::harness
