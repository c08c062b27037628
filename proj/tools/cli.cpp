#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "eqone/errors.hpp"
#include "eqone/faraday.hpp"
#include "eqone/harness.hpp"
#include "eqone/io.hpp"
#include "eqone/limits.hpp"
#include "eqone/protocol.hpp"

#ifndef EQONE_DEFAULT_CONSTANTS
#define EQONE_DEFAULT_CONSTANTS "codata2018.json"
#endif
#ifndef EQONE_INSTALLED_CONSTANTS
#define EQONE_INSTALLED_CONSTANTS EQONE_DEFAULT_CONSTANTS
#endif

namespace eqone::cli {
namespace {

using nlohmann::json;

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

bool given(double v) { return !std::isnan(v); }

std::string config_key(std::string name) {
  std::replace(name.begin(), name.end(), '-', '_');
  return name;
}

// Command-line options of one (sub)command. Options not given on the command
// line are filled from the matching section of the --config file.
class OptionTable {
 public:
  explicit OptionTable(CLI::App* app) : app_(app) {}

  template <class T>
  CLI::Option* add(const std::string& name, T& var, const std::string& help) {
    CLI::Option* opt = app_->add_option("--" + name, var, help);
    bind(name, opt, [&var](const json& j) { var = j.get<T>(); });
    return opt;
  }

  CLI::Option* add_flag(const std::string& name, bool& var, const std::string& help) {
    CLI::Option* opt = app_->add_flag("--" + name, var, help);
    bind(name, opt, [&var](const json& j) { var = j.get<bool>(); });
    return opt;
  }

  /// Keys in `skip` are handled elsewhere.
  void fill_from(const json& section, const std::string& where, const std::vector<std::string>& skip = {}) const {
    if (!section.is_object()) throw InputError("config section '" + where + "' must be an object");
    for (const auto& [key, value] : section.items()) {
      if (std::find(skip.begin(), skip.end(), key) != skip.end()) continue;
      const auto it = std::find_if(bindings_.begin(), bindings_.end(), [&](const auto& b) { return b.key == key; });
      if (it == bindings_.end()) throw InputError("unknown key '" + key + "' in config section '" + where + "'");
      if (it->option->count() > 0) continue;
      try {
        it->set(value);
      } catch (const json::exception& e) {
        throw InputError("config key '" + key + "' in '" + where + "': " + e.what());
      }
    }
  }

 private:
  struct Binding {
    std::string key;
    CLI::Option* option;
    std::function<void(const json&)> set;
  };

  void bind(const std::string& name, CLI::Option* opt, std::function<void(const json&)> set) {
    bindings_.push_back({config_key(name), opt, std::move(set)});
  }

  CLI::App* app_;
  std::vector<Binding> bindings_;
};

struct UnitSystem {
  Units units = Units::natural;
  double hbar = 1.0;
  double mu0 = 1.0;

  /// Field corresponding to Larmor angular frequency `omega`: hbar omega / (g mu0).
  double field(double omega, double g) const { return hbar * omega / (g * mu0); }
  double omega(double field, double g) const { return g * mu0 * field / hbar; }
};

std::string_view units_name(Units u) { return u == Units::si ? "si" : "natural"; }

json header(const std::string& command, const UnitSystem& units) {
  return {{"schema_version", std::string(io::kSchemaVersion)},
          {"command", command},
          {"units", std::string(units_name(units.units))}};
}

angmom::SpinQuantumNumber spin_from(double j) {
  const auto s = angmom::SpinQuantumNumber::from_real(j);
  if (s.two_j() < 1) throw InputError("J must be at least 1/2");
  return s;
}

// ---------------------------------------------------------------------------
// Subcommand options

struct FormulaOptions {
  double j = 0.5, gamma = 1.0, n = 1.0, t = 1.0, g = 1.0;
  double e_field = kUnset, t1 = kUnset, b = kUnset;

  void add(OptionTable& o) {
    o.add("j", j, "Spin J (multiple of 1/2)");
    o.add("gamma", gamma, "Relaxation rate");
    o.add("n", n, "Number of spins");
    o.add("t", t, "Total measurement time");
    o.add("g", g, "Lande factor");
    o.add("e-field", e_field, "Effective electric field (enables the EDM limit)");
    o.add("t1", t1, "Single-shot time (enables the repeated single-spin estimate)");
    o.add("b", b, "Field for the signal-to-noise ratios");
  }
};

struct MediumOptions {
  double gamma = 1.0, x = 2.0, doppler = 0.0, saturation = 1.0, detuning = 0.0;
  std::uint64_t n = 1000000;

  void add(OptionTable& o, bool with_depth = true) {
    o.add("gamma", gamma, "Natural linewidth");
    if (with_depth) o.add("x", x, "Optical depth l/l0");
    o.add("n", n, "Number of atoms");
    o.add("doppler", doppler, "Doppler width (0 disables the penalty)");
    o.add("saturation", saturation, "Saturation parameter in [0, 1]");
    o.add("detuning", detuning, "Detuning from resonance");
  }

  faraday::OpticalMedium medium() const {
    faraday::OpticalMedium m;
    m.gamma = gamma;
    m.optical_depth = x;
    m.n_atoms = n;
    m.doppler_width = doppler;
    m.saturation = saturation;
    m.detuning = detuning;
    m.validate();
    return m;
  }
};

struct SimulateOptions {
  double j = 0.5, omega = 0.0, b = kUnset, gamma = 1.0, t1 = kUnset, g = 1.0;
  std::uint64_t n = 100, reps = 100, campaign = 0;
  std::size_t campaigns = 0;

  void add(OptionTable& o) {
    o.add("j", j, "Spin J (multiple of 1/2)");
    o.add("omega", omega, "Larmor angular frequency g mu0 B / hbar");
    o.add("b", b, "Field (overrides --omega; tesla with --units si)");
    o.add("gamma", gamma, "Relaxation rate");
    o.add("t1", t1, "Single-shot precession time (default 1/gamma)");
    o.add("g", g, "Lande factor");
    o.add("n", n, "Spins per repetition");
    o.add("reps", reps, "Repetitions");
    o.add("campaign", campaign, "Campaign index (selects the random stream)");
    o.add("campaigns", campaigns, "Also estimate the sensitivity from this many campaigns (>= 30)");
  }

  protocol::ProtocolConfig config(const UnitSystem& u, std::uint64_t seed) const {
    protocol::ProtocolConfig c;
    c.j = spin_from(j);
    c.gamma = gamma;
    if (given(t1)) c.t1 = t1;
    c.omega = given(b) ? u.omega(b, g) : omega;
    c.n_spins = n;
    c.n_reps = reps;
    c.seed = seed;
    c.validate();
    return c;
  }
};

struct SweepOptions {
  std::string model = "mc", param = "n_spins";
  std::vector<double> values;
  double from = kUnset, to = kUnset;
  std::size_t points = 5, campaigns = 200;
  double j = 0.5, omega = 0.0, gamma = 1.0, t1 = kUnset, t = kUnset, g = 1.0;
  double x = 2.0, doppler = 0.0, saturation = 1.0, detuning = 0.0;
  std::uint64_t n = 100, reps = 100;
  bool weighted = false;

  void add(OptionTable& o) {
    o.add("model", model, "mc | faraday | formula")->check(CLI::IsMember({"mc", "faraday", "formula"}));
    o.add("param", param, "n_spins | t_total | gamma | spin_j | optical_depth | detuning");
    o.add("values", values, "Comma-separated sweep values")->delimiter(',');
    o.add("from", from, "First value of a geometric grid");
    o.add("to", to, "Last value of a geometric grid");
    o.add("points", points, "Points of the geometric grid");
    o.add("campaigns", campaigns, "Monte Carlo campaigns per point");
    o.add("j", j, "Spin J");
    o.add("omega", omega, "Larmor angular frequency (mc)");
    o.add("gamma", gamma, "Relaxation rate / linewidth");
    o.add("t1", t1, "Single-shot time (mc, default 1/gamma)");
    o.add("t", t, "Total time (default reps * t1)");
    o.add("g", g, "Lande factor (SI output conversion)");
    o.add("x", x, "Optical depth (faraday)");
    o.add("doppler", doppler, "Doppler width (faraday)");
    o.add("saturation", saturation, "Saturation parameter (faraday)");
    o.add("detuning", detuning, "Detuning (faraday)");
    o.add("n", n, "Spins / atoms");
    o.add("reps", reps, "Repetitions (mc)");
    o.add_flag("weighted", weighted, "Weight the power-law fit by the error bars");
  }

  double shot_time() const { return given(t1) ? t1 : 1.0 / gamma; }
  double total_time() const { return given(t) ? t : static_cast<double>(reps) * shot_time(); }

  // Grid spacing that keeps Monte Carlo points realizable.
  double quantum(harness::SweptParameter p) const {
    using harness::SweptParameter;
    if (model == "mc") {
      if (p == SweptParameter::n_spins) return 1.0;
      if (p == SweptParameter::t_total) return shot_time();
      if (p == SweptParameter::gamma) return 1.0 / total_time();
      if (p == SweptParameter::spin_j) return 0.5;
    }
    if (p == SweptParameter::n_spins) return 1.0;
    if (p == SweptParameter::spin_j) return 0.5;
    return 0.0;
  }

  std::vector<double> grid(harness::SweptParameter p) const {
    if (!values.empty()) return values;
    if (!given(from) || !given(to)) throw InputError("sweep needs --values or --from/--to");
    if (!(from > 0.0) || !(to > from)) throw InputError("sweep grid needs 0 < from < to");
    if (points < 1) throw InputError("sweep grid needs at least one point");
    const double q = quantum(p);
    std::vector<double> out;
    for (std::size_t i = 0; i < points; ++i) {
      const double f = points == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(points - 1);
      double v = from * std::pow(to / from, f);
      if (q > 0.0) v = std::max(q, std::round(v / q) * q);
      if (out.empty() || v > out.back()) out.push_back(v);
    }
    return out;
  }

  harness::SweepBase base(std::uint64_t seed) const {
    if (model == "mc") {
      protocol::ProtocolConfig c;
      c.j = spin_from(j);
      c.omega = omega;
      c.gamma = gamma;
      if (given(t1)) c.t1 = t1;
      c.n_spins = n;
      c.n_reps = reps;
      c.seed = seed;
      return c;
    }
    if (model == "faraday") {
      harness::FaradayBase b;
      b.medium.gamma = gamma;
      b.medium.optical_depth = x;
      b.medium.n_atoms = n;
      b.medium.doppler_width = doppler;
      b.medium.saturation = saturation;
      b.medium.detuning = detuning;
      b.t = total_time();
      return b;
    }
    limits::SensorParams p;
    p.j = spin_from(j);
    p.gamma = gamma;
    p.n = static_cast<double>(n);
    p.t = total_time();
    p.g = g;
    return p;
  }
};

struct FaradayOptions {
  MediumOptions medium;
  double t = 1.0, omega = 0.0, b = kUnset, g = 1.0;
  bool scan = false;
  double x_min = 0.04, x_max = 20.0;
  std::size_t points = 500;

  void add(OptionTable& o) {
    medium.add(o);
    o.add("t", t, "Measurement time");
    o.add("omega", omega, "Larmor angular frequency for the reported rotation");
    o.add("b", b, "Field (overrides --omega; tesla with --units si)");
    o.add("g", g, "Lande factor");
    o.add_flag("scan", scan, "Emit a delta_b(x) scan instead of a single point");
    o.add("x-min", x_min, "Scan start");
    o.add("x-max", x_max, "Scan end");
    o.add("points", points, "Scan points");
  }
};

struct OptimizeOptions {
  MediumOptions medium;
  double t = 1.0;

  void add(OptionTable& o) {
    medium.add(o, false);
    o.add("t", t, "Measurement time");
  }
};

struct EquivalenceOptions {
  MediumOptions medium{1.0, 2.0, 0.0, 1.0, 0.0, 100};
  double j = 0.5;
  std::uint64_t reps = 100;
  std::size_t campaigns = 200;

  void add(OptionTable& o) {
    medium.add(o);
    o.add("j", j, "Spin J");
    o.add("reps", reps, "Repetitions; T = reps / gamma");
    o.add("campaigns", campaigns, "Monte Carlo campaigns per triple");
  }
};

struct OperatorsOptions {
  double j = 0.5;
  void add(OptionTable& o) { o.add("j", j, "Spin J"); }
};

// ---------------------------------------------------------------------------
// Commands

json run_formula(const FormulaOptions& o, const UnitSystem& u) {
  limits::SensorParams p;
  p.g = o.g;
  p.mu0 = u.mu0;
  p.hbar = u.hbar;
  p.j = spin_from(o.j);
  p.gamma = o.gamma;
  p.n = o.n;
  p.t = o.t;
  if (given(o.e_field)) p.e_field = o.e_field;

  json out = header("formula", u);
  out["inputs"] = {{"j", o.j}, {"gamma", o.gamma}, {"n", o.n}, {"t", o.t}, {"g", o.g}};
  out["delta_b"] = limits::delta_b(p);
  if (given(o.e_field)) out["delta_d"] = limits::delta_d(p);
  if (given(o.t1)) out["delta_b_single_spin"] = limits::delta_b_single_spin(p, o.t1);
  if (given(o.b)) {
    out["snr_single"] = limits::snr_single(p, o.b);
    out["snr_ensemble"] = limits::snr_ensemble(p, o.b);
  }
  return out;
}

json run_simulate(const SimulateOptions& o, const RunConfig& rc, const UnitSystem& u, std::ostream& err) {
  const auto cfg = o.config(u, rc.seed);
  const auto system = angmom::build_spin_system(cfg.j);
  const protocol::ExecutionOptions exec{rc.workers};
  const auto result = protocol::run_campaign(system, cfg, o.campaign, exec);
  if (result.saturated) err << "warning: mean projection reached +-J; the estimate is clamped\n";

  json out = header("simulate", u);
  out["seed"] = rc.seed;
  out["config"] = {{"j", cfg.j.value()},     {"omega", cfg.omega},     {"gamma", cfg.gamma},
                   {"t1", cfg.shot_time()},  {"n_spins", cfg.n_spins}, {"n_reps", cfg.n_reps},
                   {"campaign", o.campaign}, {"g", o.g}};
  out["result"] = io::to_json(result);
  out["field_hat"] = u.field(result.omega_hat, o.g);
  out["sigma_field"] = u.field(result.uncertainty, o.g);
  if (o.campaigns > 0) {
    const auto est = protocol::sensitivity_mc(system, cfg, o.campaigns, exec);
    json s = io::to_json(est);
    s["delta_b"] = u.field(est.delta_omega, o.g);
    s["delta_b_err"] = u.field(est.delta_omega_stderr, o.g);
    out["sensitivity"] = std::move(s);
  }
  return out;
}

void run_sweep(const SweepOptions& o, const RunConfig& rc, const UnitSystem& u, std::ostream& out,
               std::ostream& err) {
  harness::SweepSpec spec;
  spec.parameter = harness::parse_swept_parameter(o.param);
  spec.values = o.grid(spec.parameter);
  spec.base = o.base(rc.seed);
  spec.campaigns_per_point = o.campaigns;
  spec.seed = rc.seed;
  if (auto* p = std::get_if<limits::SensorParams>(&spec.base)) {
    p->hbar = u.hbar;
    p->mu0 = u.mu0;
  }
  auto result = harness::run_sweep(spec, {rc.workers});
  if (!std::holds_alternative<limits::SensorParams>(spec.base)) {
    for (auto& row : result.rows) {
      row.delta_b = u.field(row.delta_b, o.g);
      row.delta_b_err = u.field(row.delta_b_err, o.g);
    }
  }
  for (const auto& row : result.rows) {
    if (!row.ok) err << "warning: sweep point " << row.param << " failed: " << row.error << '\n';
  }

  if (rc.output_format.value_or(OutputFormat::csv) == OutputFormat::csv) {
    io::write_sweep_csv(out, result);
    return;
  }
  json j = header("sweep", u);
  j["model"] = o.model;
  j["seed"] = rc.seed;
  j["campaigns_per_point"] = o.campaigns;
  j["sweep"] = io::to_json(result);
  try {
    j["fit"] = io::to_json(harness::fit_power_law(result, o.weighted));
  } catch (const InputError& e) {
    j["fit"] = nullptr;
    j["fit_error"] = e.what();
  }
  out << j.dump(2) << '\n';
}

void run_faraday(const FaradayOptions& o, const RunConfig& rc, const UnitSystem& u, std::ostream& out,
                 std::ostream& err) {
  const auto m = o.medium.medium();
  if (o.scan) {
    if (!(o.x_max > o.x_min) || o.x_min < 0.0 || o.points < 2) throw InputError("scan needs 0 <= x-min < x-max, points >= 2");
    std::vector<double> xs(o.points);
    for (std::size_t i = 0; i < o.points; ++i) {
      xs[i] = o.x_min + (o.x_max - o.x_min) * static_cast<double>(i) / static_cast<double>(o.points - 1);
    }
    auto rows = faraday::scan_optical_depth(m, o.t, xs);
    for (auto& r : rows) r.delta_b_scaled = u.field(r.delta_b_scaled, o.g);
    if (rc.output_format.value_or(OutputFormat::csv) == OutputFormat::csv) {
      io::write_scan_csv(out, rows);
      return;
    }
    json j = header("faraday", u);
    j["scan"] = json::array();
    for (const auto& r : rows) j["scan"].push_back(io::to_json(r));
    out << j.dump(2) << '\n';
    return;
  }

  const double omega = given(o.b) ? u.omega(o.b, o.g) : o.omega;
  if (faraday::near_linear_limit(m, omega)) err << "warning: |omega / gamma| > 0.1; linear model is approximate\n";
  auto s = faraday::magnetometer_sensitivity(m, o.t, omega);
  s.at_depth.delta_b_scaled = u.field(s.at_depth.delta_b_scaled, o.g);
  s.at_optimum.delta_b_scaled = u.field(s.at_optimum.delta_b_scaled, o.g);

  if (rc.output_format == OutputFormat::csv) {
    io::write_scan_csv(out, {s.at_depth});
    return;
  }
  json j = header("faraday", u);
  j["medium"] = {{"gamma", m.gamma},         {"optical_depth", m.optical_depth}, {"n_atoms", m.n_atoms},
                 {"doppler_width", m.doppler_width}, {"saturation", m.saturation}, {"detuning", m.detuning}};
  j["t"] = o.t;
  j["omega"] = omega;
  j["photon_budget"] = faraday::photon_budget(m, o.t);
  j["doppler_penalty"] = m.doppler_width > 0.0 ? faraday::doppler_penalty(m.gamma, m.doppler_width) : 1.0;
  j["detuned_snr_relative"] = faraday::detuned_snr_relative(std::abs(m.detuning) / m.gamma);
  j["at_depth"] = io::to_json(s.at_depth);
  j["at_optimum"] = io::to_json(s.at_optimum);
  out << j.dump(2) << '\n';
}

void run_optimize(const OptimizeOptions& o, const RunConfig& rc, const UnitSystem& u, std::ostream& out) {
  const auto m = o.medium.medium();
  const double x = faraday::optimize_optical_depth(m, o.t);
  if (rc.output_format == OutputFormat::csv) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", x);
    out << "optimal_optical_depth\n" << buf << '\n';
    return;
  }
  json j = header("optimize", u);
  j["optimal_optical_depth"] = x;
  j["snr_at_optimum"] = faraday::evaluate(m, o.t, x).snr;
  j["search_interval"] = {faraday::kOptimalDepthLow, faraday::kOptimalDepthHigh};
  out << j.dump(2) << '\n';
}

json run_equivalence(const EquivalenceOptions& o, const RunConfig& rc, const UnitSystem& u) {
  protocol::ProtocolConfig spin;
  spin.j = spin_from(o.j);
  spin.gamma = o.medium.gamma;
  spin.n_spins = o.medium.n;
  spin.n_reps = o.reps;
  spin.seed = rc.seed;
  harness::FaradayBase optical{o.medium.medium(), spin.total_time()};
  const auto report = harness::equivalence_report(spin, optical, o.campaigns, {rc.workers});
  json j = header("equivalence", u);
  j["seed"] = rc.seed;
  j["j"] = o.j;
  j["report"] = io::to_json(report);
  return j;
}

json run_operators(const OperatorsOptions& o, const UnitSystem& u) {
  const auto s = angmom::build_spin_system(angmom::SpinQuantumNumber::from_real(o.j));
  json j = header("operators", u);
  j["j"] = o.j;
  j["basis"] = "m = J, J-1, ..., -J";
  j["jx"] = io::operator_to_json(s.jx());
  j["jy"] = io::operator_to_json(s.jy());
  j["jz"] = io::operator_to_json(s.jz());
  j["jplus"] = io::operator_to_json(s.jplus());
  j["jminus"] = io::operator_to_json(s.jminus());
  return j;
}

// ---------------------------------------------------------------------------

json load_json_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw InputError(std::string("cannot open ") + what + " '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InputError(std::string("invalid JSON in ") + what + " '" + path.string() + "': " + e.what());
  }
}

std::uint64_t parse_seed(const std::string& text, const char* source) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(text, &used, 0);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw InputError(std::string("invalid seed from ") + source + ": '" + text + "'");
  }
}

}  // namespace

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                       const std::optional<std::string>& env_seed) {
  CLI::App app{"Spin-projection-noise sensitivity toolkit", "eqone"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string seed_text, units = "natural", format, config_path, out_path, constants_path;
  unsigned workers = 1;
  OptionTable globals(&app);
  auto* seed_opt = app.add_option("--seed", seed_text, "Random seed (default 3735928559 or $EQONE_SEED)");
  globals.add("units", units, "natural | si")->check(CLI::IsMember({"natural", "si"}));
  globals.add("format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  globals.add("workers", workers, "Worker threads (0 = all cores); does not change results");
  globals.add("constants-file", constants_path, "JSON file with hbar and bohr_magneton (SI)");
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", out_path, "Write results to this file instead of standard output");

  FormulaOptions formula;
  SimulateOptions simulate;
  SweepOptions sweep;
  FaradayOptions far;
  OptimizeOptions optimize;
  EquivalenceOptions equivalence;
  OperatorsOptions operators;

  struct Sub {
    CLI::App* app;
    OptionTable table;
  };
  std::vector<Sub> subs;
  auto add_sub = [&](const char* name, const char* help, auto& opts) {
    CLI::App* sub = app.add_subcommand(name, help);
    subs.push_back({sub, OptionTable(sub)});
    opts.add(subs.back().table);
  };
  subs.reserve(7);
  add_sub("formula", "Closed-form sensitivity limits", formula);
  add_sub("simulate", "One Monte Carlo campaign of the pump-precession-probe protocol", simulate);
  add_sub("sweep", "Parameter sweep with power-law fit", sweep);
  add_sub("faraday", "Faraday-rotation magnetometer model (point or scan)", far);
  add_sub("optimize", "Optimal optical depth of the Faraday magnetometer", optimize);
  add_sub("equivalence", "Cross-model comparison at matched (N, Gamma, T)", equivalence);
  add_sub("operators", "Dump angular-momentum matrices as JSON", operators);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitConfigError;
  }

  try {
    const Sub& active = *std::find_if(subs.begin(), subs.end(), [](const Sub& s) { return s.app->parsed(); });
    const std::string command = active.app->get_name();

    json file_config = json::object();
    if (!config_path.empty()) {
      file_config = load_json_file(config_path, "config file");
      if (!file_config.is_object()) throw InputError("config file must hold a JSON object");
      std::vector<std::string> skip{"seed", "constants"};
      for (const auto& s : subs) skip.push_back(s.app->get_name());
      globals.fill_from(file_config, "<top level>", skip);
      if (file_config.contains(command)) active.table.fill_from(file_config.at(command), command);
    }

    RunConfig rc;
    rc.workers = workers;
    rc.units = units == "si" ? Units::si : Units::natural;
    if (!format.empty()) rc.output_format = format == "csv" ? OutputFormat::csv : OutputFormat::json;
    rc.output_path = out_path;
    if (seed_opt->count() > 0) {
      rc.seed = parse_seed(seed_text, "--seed");
    } else if (file_config.contains("seed")) {
      const auto& s = file_config.at("seed");
      rc.seed = s.is_string() ? parse_seed(s.get<std::string>(), "config") : s.get<std::uint64_t>();
    } else if (env_seed) {
      rc.seed = parse_seed(*env_seed, "EQONE_SEED");
    }

    UnitSystem u;
    u.units = rc.units;
    if (rc.units == Units::si) {
      if (constants_path.empty()) {
        constants_path = std::filesystem::exists(EQONE_DEFAULT_CONSTANTS) ? EQONE_DEFAULT_CONSTANTS
                                                                          : EQONE_INSTALLED_CONSTANTS;
      }
      json constants = load_json_file(constants_path, "constants file");
      if (file_config.contains("constants")) constants.update(file_config.at("constants"));
      rc.constants.hbar = constants.value("hbar", 0.0);
      rc.constants.bohr_magneton = constants.value("bohr_magneton", 0.0);
      if (!(rc.constants.hbar > 0.0) || !(rc.constants.bohr_magneton > 0.0)) {
        throw InputError("SI units need positive hbar and bohr_magneton constants");
      }
      u.hbar = rc.constants.hbar;
      u.mu0 = rc.constants.bohr_magneton;
    }

    std::ostringstream buffer;
    if (command == "formula") {
      buffer << run_formula(formula, u).dump(2) << '\n';
    } else if (command == "simulate") {
      buffer << run_simulate(simulate, rc, u, err).dump(2) << '\n';
    } else if (command == "sweep") {
      run_sweep(sweep, rc, u, buffer, err);
    } else if (command == "faraday") {
      run_faraday(far, rc, u, buffer, err);
    } else if (command == "optimize") {
      run_optimize(optimize, rc, u, buffer);
    } else if (command == "equivalence") {
      buffer << run_equivalence(equivalence, rc, u).dump(2) << '\n';
    } else {
      buffer << run_operators(operators, u).dump(2) << '\n';
    }

    if (rc.output_path.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(rc.output_path, std::ios::binary);
      if (!file) throw InputError("cannot write '" + rc.output_path.string() + "'");
      file << buffer.str();
    }
    return kExitOk;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumericError;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumericError;
  }
}

int parse_and_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                       const std::optional<std::string>& env_seed) {
  std::vector<const char*> argv{"eqone"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return parse_and_dispatch(static_cast<int>(argv.size()), argv.data(), out, err, env_seed);
}

}  // namespace eqone::cli
