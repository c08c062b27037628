#pragma once

// Parameter sweeps and cross-model comparison of the three sensitivity
// routes: Monte Carlo spin protocol, Faraday-rotation model, closed form.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "eqone/faraday.hpp"
#include "eqone/limits.hpp"
#include "eqone/power_law.hpp"
#include "eqone/protocol.hpp"

namespace eqone::harness {

enum class SweptParameter { n_spins, t_total, gamma, spin_j, optical_depth, detuning };

std::string_view to_string(SweptParameter p);
/// Throws InputError for an unknown name.
SweptParameter parse_swept_parameter(std::string_view name);

/// Faraday medium plus its measurement time.
struct FaradayBase {
  faraday::OpticalMedium medium;
  double t = 1.0;
};

using SweepBase = std::variant<protocol::ProtocolConfig, FaradayBase, limits::SensorParams>;

struct SweepSpec {
  SweptParameter parameter = SweptParameter::n_spins;
  std::vector<double> values;
  SweepBase base;
  std::size_t campaigns_per_point = 200;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SweepRow {
  double param = 0.0;
  double delta_b = 0.0;
  /// Bootstrap error for Monte Carlo points, zero for analytic ones.
  double delta_b_err = 0.0;
  bool ok = true;
  std::string error;
};

struct SweepResult {
  SweptParameter parameter = SweptParameter::n_spins;
  std::vector<SweepRow> rows;
};

/// Evaluates every point in order. Point i of a Monte Carlo sweep uses seed
/// derive_seed(spec.seed, i). A point that fails is recorded with ok = false.
SweepResult run_sweep(const SweepSpec& spec, protocol::ExecutionOptions exec = {});

/// Fits the successful rows of `table`.
PowerLawFit fit_power_law(const SweepResult& table, bool weighted = false);

struct EquivalencePoint {
  double n = 0.0;
  double gamma = 0.0;
  double t = 0.0;
  double delta_b_mc = 0.0;
  double delta_b_mc_err = 0.0;
  double delta_b_faraday = 0.0;
  double delta_b_formula = 0.0;
  double faraday_over_formula = 0.0;
  double mc_over_formula = 0.0;
  double mc_over_faraday = 0.0;
};

inline constexpr double kRatioStabilityBand = 0.20;
inline constexpr std::string_view kEquivalenceSchema = "eqone.equivalence/1";

struct EquivalenceReport {
  std::string schema_version{kEquivalenceSchema};
  /// points[0] is the requested configuration; the rest rescale (N, Gamma, T).
  std::vector<EquivalencePoint> points;
  /// max/min - 1 of each ratio across points.
  double faraday_ratio_spread = 0.0;
  double mc_ratio_spread = 0.0;
  double mc_faraday_ratio_spread = 0.0;
  bool ratios_stable = false;
};

/// (N, Gamma, T) multipliers applied to the requested configuration.
struct TripleScale {
  std::uint64_t n;
  std::uint64_t gamma;
  std::uint64_t t;
};
inline constexpr TripleScale kEquivalenceScales[] = {{1, 1, 1}, {4, 1, 1}, {1, 4, 1}, {1, 1, 4}, {2, 2, 2}};

/// Compares the three routes at matched (N, Gamma, T). Throws InputError if
/// the spin and optical configurations do not describe the same triple.
EquivalenceReport equivalence_report(const protocol::ProtocolConfig& spin_cfg, const FaradayBase& optical_cfg,
                                     std::size_t campaigns = 200, protocol::ExecutionOptions exec = {});

/// Copy of `cfg` with N, Gamma and T multiplied by `scale`; t1 * Gamma and
/// omega * t1 are held fixed.
protocol::ProtocolConfig rescale(const protocol::ProtocolConfig& cfg, TripleScale scale);

}  // namespace eqone::harness
