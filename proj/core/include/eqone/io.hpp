#pragma once

// JSON and CSV encodings of results. Field names are part of the external
// interface; see docs/formats.md.

#include <iosfwd>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "eqone/angmom.hpp"
#include "eqone/faraday.hpp"
#include "eqone/harness.hpp"
#include "eqone/protocol.hpp"

namespace eqone::io {

inline constexpr std::string_view kSchemaVersion = "eqone/1";
inline constexpr std::string_view kSweepCsvHeader = "param,delta_b,delta_b_err";
inline constexpr std::string_view kScanCsvHeader = "x,snr,delta_b_scaled";
inline constexpr std::string_view kSweepCsvTag = "# eqone.sweep/1";
inline constexpr std::string_view kScanCsvTag = "# eqone.scan/1";

/// Row-major [[re, im], ...] rows.
nlohmann::json operator_to_json(const angmom::OperatorMatrix& op);
angmom::OperatorMatrix operator_from_json(const nlohmann::json& j);

/// Keys: mean_jy, variance, omega_hat, sigma_omega, shots, saturated.
nlohmann::json to_json(const protocol::CampaignResult& r);
protocol::CampaignResult campaign_from_json(const nlohmann::json& j);

nlohmann::json to_json(const protocol::SensitivityEstimate& e);
nlohmann::json to_json(const faraday::FaradayResult& r);
nlohmann::json to_json(const harness::PowerLawFit& f);
nlohmann::json to_json(const harness::SweepResult& r);
nlohmann::json to_json(const harness::EquivalenceReport& r);

void write_sweep_csv(std::ostream& out, const harness::SweepResult& r);
void write_scan_csv(std::ostream& out, const std::vector<faraday::FaradayResult>& rows);

}  // namespace eqone::io
