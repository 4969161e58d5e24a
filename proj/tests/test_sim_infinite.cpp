#include <doctest.h>

#include <array>

#include "blocksim/montecarlo.hpp"
#include "blocksim/sim_infinite.hpp"
#include "blocksim/stats.hpp"

using namespace blocksim;

TEST_CASE("pair draw positions tile the delay stream") {
  std::uint64_t expected = 0;
  for (std::uint64_t k = 1; k < 60; ++k) {
    for (std::uint64_t i = k; i-- > 0;) CHECK(pair_draw_position(k, i) == expected++);
  }
}

TEST_CASE("zero delay gives a single chain") {
  InfSimConfig c;
  c.n = 1000;
  c.beta = make_constant(0.0);
  CHECK(simulate_infinite(c).p_n == 1.0);
  c.use_pruning = false;
  CHECK(simulate_infinite(c).p_n == 1.0);
}

TEST_CASE("pruned and full scans give identical series") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    InfSimConfig c;
    c.n = 600;
    c.beta = make_exponential(std::array{0.01, 0.1, 1.0, 10.0}[seed % 4]);
    c.seed = seed;
    c.record_series = true;
    const auto pruned = simulate_infinite(c);
    c.use_pruning = false;
    const auto full = simulate_infinite(c);
    CHECK(pruned.series->h == full.series->h);
    CHECK(pruned.p_n == full.p_n);
    CHECK(pruned.scanned <= full.scanned);
  }
}

TEST_CASE("series invariants") {
  InfSimConfig c;
  c.n = 2000;
  c.beta = make_gamma(1.0, 3.0);
  c.seed = 4;
  c.record_series = true;
  const auto out = simulate_infinite(c);
  const auto& s = *out.series;
  CHECK(s.h[0] == 1);
  for (std::size_t k = 1; k < c.n; ++k) {
    CHECK(s.h[k] >= 2);
    CHECK(s.z[k] == std::max(s.z[k - 1], s.h[k]));
    CHECK(s.t[k] > s.t[k - 1]);
  }
  CHECK(out.p_n > 0.0);
  CHECK(out.p_n <= 1.0);
}

TEST_CASE("beta/alpha = 0.1 mean is within 0.01 of 1/1.1") {
  ModelConfig model;
  model.n = 1000;
  model.beta = make_exponential(0.1);
  const auto est = run_replications(model, 100, 2024);
  MESSAGE("mean p*_n = " << est.mean << " +- " << est.std_error);
  CHECK(std::abs(est.mean - 1.0 / 1.1) < 0.01);
}
