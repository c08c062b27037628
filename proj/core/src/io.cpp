#include <cstdio>
#include <cmath>
#include <ostream>
#include <string>

#include "eqone/errors.hpp"
#include "eqone/io.hpp"

namespace eqone::io {
namespace {

using nlohmann::json;

// %.17g keeps every double round-trippable in CSV.
std::string csv_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

json operator_to_json(const angmom::OperatorMatrix& op) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < op.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < op.cols(); ++c) row.push_back({op(r, c).real(), op(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

angmom::OperatorMatrix operator_from_json(const json& j) {
  if (!j.is_array()) throw InputError("operator JSON must be an array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  angmom::OperatorMatrix op(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) throw InputError("operator JSON is not square");
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto& e = row.at(static_cast<std::size_t>(c));
      op(r, c) = {e.at(0).get<double>(), e.at(1).get<double>()};
    }
  }
  return op;
}

json to_json(const protocol::CampaignResult& r) {
  return {{"mean_jy", r.mean_jy},         {"variance", r.sample_variance}, {"omega_hat", r.omega_hat},
          {"sigma_omega", r.uncertainty}, {"shots", r.shots},              {"saturated", r.saturated}};
}

protocol::CampaignResult campaign_from_json(const json& j) {
  protocol::CampaignResult r;
  r.mean_jy = j.at("mean_jy").get<double>();
  r.sample_variance = j.at("variance").get<double>();
  r.omega_hat = j.at("omega_hat").get<double>();
  r.uncertainty = j.at("sigma_omega").get<double>();
  r.shots = j.at("shots").get<std::uint64_t>();
  r.saturated = j.at("saturated").get<bool>();
  return r;
}

json to_json(const protocol::SensitivityEstimate& e) {
  return {{"delta_omega", e.delta_omega},
          {"delta_omega_err", e.delta_omega_stderr},
          {"mean_omega_hat", e.mean_omega_hat},
          {"campaigns", e.campaigns},
          {"saturated_campaigns", e.saturated_campaigns}};
}

json to_json(const faraday::FaradayResult& r) {
  return {{"optical_depth", r.optical_depth},
          {"rotation_angle", r.rotation_angle},
          {"n_photons", r.n_photons},
          {"delta_phi", r.delta_phi_infinite ? json(nullptr) : json(r.delta_phi)},
          {"delta_phi_infinite", r.delta_phi_infinite},
          {"delta_b_scaled", r.delta_b_infinite ? json(nullptr) : json(r.delta_b_scaled)},
          {"delta_b_infinite", r.delta_b_infinite},
          {"snr", r.snr}};
}

json to_json(const harness::PowerLawFit& f) {
  return {{"exponent", f.exponent},
          {"exponent_stderr", f.exponent_stderr},
          {"log_prefactor", f.log_prefactor},
          {"r_squared", f.r_squared},
          {"points", f.points}};
}

json to_json(const harness::SweepResult& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json o = {{"param", row.param}, {"delta_b", row.delta_b}, {"delta_b_err", row.delta_b_err}, {"ok", row.ok}};
    if (!row.ok) o["error"] = row.error;
    rows.push_back(std::move(o));
  }
  return {{"parameter", std::string(harness::to_string(r.parameter))}, {"rows", std::move(rows)}};
}

json to_json(const harness::EquivalenceReport& r) {
  json points = json::array();
  for (const auto& p : r.points) {
    points.push_back({{"n", p.n},
                      {"gamma", p.gamma},
                      {"t", p.t},
                      {"delta_b_mc", p.delta_b_mc},
                      {"delta_b_mc_err", p.delta_b_mc_err},
                      {"delta_b_faraday", p.delta_b_faraday},
                      {"delta_b_formula", p.delta_b_formula},
                      {"faraday_over_formula", p.faraday_over_formula},
                      {"mc_over_formula", p.mc_over_formula},
                      {"mc_over_faraday", p.mc_over_faraday}});
  }
  return {{"schema_version", r.schema_version},
          {"points", std::move(points)},
          {"faraday_ratio_spread", r.faraday_ratio_spread},
          {"mc_ratio_spread", r.mc_ratio_spread},
          {"mc_faraday_ratio_spread", r.mc_faraday_ratio_spread},
          {"stability_band", harness::kRatioStabilityBand},
          {"ratios_stable", r.ratios_stable}};
}

void write_sweep_csv(std::ostream& out, const harness::SweepResult& r) {
  out << kSweepCsvTag << '\n' << kSweepCsvHeader << '\n';
  for (const auto& row : r.rows) {
    if (!row.ok) {
      out << "# failed " << csv_number(row.param) << ": " << row.error << '\n';
      continue;
    }
    out << csv_number(row.param) << ',' << csv_number(row.delta_b) << ',' << csv_number(row.delta_b_err) << '\n';
  }
}

void write_scan_csv(std::ostream& out, const std::vector<faraday::FaradayResult>& rows) {
  out << kScanCsvTag << '\n' << kScanCsvHeader << '\n';
  for (const auto& r : rows) {
    out << csv_number(r.optical_depth) << ',' << csv_number(r.snr) << ',' << csv_number(r.delta_b_scaled) << '\n';
  }
}

}  // namespace eqone::io
