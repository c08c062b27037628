#include <random>
#include <sstream>

#include <doctest.h>

#include "eqone/io.hpp"

using namespace eqone;

TEST_CASE("campaign records round-trip through JSON text") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    protocol::CampaignResult r;
    r.mean_jy = u(gen);
    r.sample_variance = std::abs(u(gen));
    r.omega_hat = u(gen) * 1e-7;
    r.uncertainty = std::abs(u(gen)) * 1e3;
    r.shots = gen();
    r.saturated = (i % 3) == 0;
    const auto text = io::to_json(r).dump();
    CHECK(io::campaign_from_json(nlohmann::json::parse(text)) == r);
  }
}

TEST_CASE("campaign JSON uses the documented field names") {
  const auto j = io::to_json(protocol::CampaignResult{});
  for (const char* key : {"mean_jy", "variance", "omega_hat", "sigma_omega", "shots", "saturated"}) {
    CHECK(j.contains(key));
  }
  CHECK(j.size() == 6);
}

TEST_CASE("operator dump round-trips") {
  const auto s = angmom::build_spin_system(angmom::SpinQuantumNumber(3));
  const auto j = io::operator_to_json(s.jy());
  CHECK(j.size() == 4);
  CHECK(j[0][1][1].get<double>() == doctest::Approx(-s.jy()(0, 1).imag() * -1));
  const auto back = io::operator_from_json(nlohmann::json::parse(j.dump()));
  CHECK((back - s.jy()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("sweep CSV layout") {
  harness::SweepResult r;
  r.rows = {{1.0, 0.5, 0.01, true, {}}, {2.0, 0.0, 0.0, false, "bad point"}, {4.0, 0.25, 0.0, true, {}}};
  std::ostringstream out;
  io::write_sweep_csv(out, r);
  CHECK(out.str() == "# eqone.sweep/1\nparam,delta_b,delta_b_err\n1,0.5,0.01\n# failed 2: bad point\n4,0.25,0\n");
}

TEST_CASE("scan CSV and infinite values") {
  faraday::OpticalMedium m;
  const auto rows = faraday::scan_optical_depth(m, 1.0, {0.0, 2.0});
  std::ostringstream out;
  io::write_scan_csv(out, rows);
  CHECK(out.str().rfind("# eqone.scan/1\nx,snr,delta_b_scaled\n0,0,inf\n2,", 0) == 0);
  const auto j = io::to_json(rows[0]);
  CHECK(j["delta_b_scaled"].is_null());
  CHECK(j["delta_b_infinite"].get<bool>());
}
