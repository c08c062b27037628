#include <cmath>
#include <set>

#include <doctest.h>

#include "eqone/rng.hpp"

using eqone::rng::CounterStream;
using eqone::rng::Philox4x32;

// Known-answer vectors published with the Random123 library (kat_vectors).
TEST_CASE("Philox4x32-10 known answers") {
  using C = Philox4x32::Counter;
  CHECK(Philox4x32::generate({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::generate({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::generate({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are pure functions of (seed, stream, index)") {
  const CounterStream a(7, 3), b(7, 3), c(7, 4), d(8, 3);
  for (std::uint64_t i = 0; i < 100; ++i) {
    CHECK(a.uniform(i) == b.uniform(i));
    CHECK(a.uniform(i) != c.uniform(i));
    CHECK(a.uniform(i) != d.uniform(i));
  }
  CHECK(a.block(5)[1] == a.uniform(11));
}

TEST_CASE("uniforms are in [0, 1) with the right moments") {
  const CounterStream s(12345, 0);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform(static_cast<std::uint64_t>(i));
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
    sum2 += u * u;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean - 0.5) < 5 * std::sqrt(1.0 / 12 / n));
  CHECK(std::abs(var - 1.0 / 12) < 1e-3);
}

TEST_CASE("derived seeds differ") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t k = 0; k < 1000; ++k) seen.insert(eqone::rng::derive_seed(42, k));
  CHECK(seen.size() == 1000);
}
