#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "blocksim/experiments.hpp"
#include "blocksim/stats.hpp"

using namespace blocksim;

TEST_CASE("zero delay replications are exactly one") {
  ModelConfig model;
  model.n = 300;
  model.beta = make_constant(0.0);
  const auto est = run_replications(model, 10, 1);
  CHECK(est.mean == 1.0);
  CHECK(est.std_error == 0.0);
  CHECK(est.replications == 10);
}

TEST_CASE("a single replication is its own summary") {
  ModelConfig model;
  model.n = 500;
  const auto est = run_replications(model, 1, 8, 1, true);
  REQUIRE(est.per_rep_values.size() == 1);
  const double v = est.per_rep_values[0];
  CHECK(est.mean == v);
  CHECK(est.q25 == v);
  CHECK(est.q50 == v);
  CHECK(est.q75 == v);
  CHECK(est.std_error == 0.0);
}

TEST_CASE("summary invariants") {
  ModelConfig model;
  model.engine = Engine::matrix;
  model.m = 5;
  model.n = 200;
  model.beta = make_exponential(1.0);
  const auto est = run_replications(model, 40, 3, 1, true);
  CHECK(est.q25 <= est.q50);
  CHECK(est.q50 <= est.q75);
  CHECK(est.mean >= est.min);
  CHECK(est.mean <= est.max);
  CHECK(est.std_error ==
        doctest::Approx(stats::sample_sd(est.per_rep_values) / std::sqrt(40.0)));
}

TEST_CASE("replications do not depend on the job count") {
  ModelConfig model;
  model.engine = Engine::network;
  model.m = 4;
  model.n = 150;
  model.beta = make_exponential(0.7);
  const auto one = replicate(model, 16, 77, 1);
  const auto four = replicate(model, 16, 77, 4);
  CHECK(one == four);
  CHECK(replicate(model, 16, 78, 1) != one);
}

TEST_CASE("replication errors name the replication") {
  ModelConfig model;
  model.alpha = make_constant(0.0);
  CHECK_THROWS_AS(replicate(model, 3, 0), ConfigError);
  CHECK_THROWS_AS(replicate(ModelConfig{}, 0, 0), ConfigError);
  ReplicationError e(4, "boom");
  CHECK(e.index() == 4);
  CHECK(std::string(e.what()) == "replication 4: boom");
}

TEST_CASE("engine names") {
  for (auto e : {Engine::network, Engine::matrix, Engine::infinite}) {
    CHECK(parse_engine(engine_name(e)) == e);
  }
  CHECK_THROWS_AS(parse_engine("quantum"), ConfigError);
}

TEST_CASE("predicted_p") {
  CHECK(predicted_p(1.0, 0.0).value == 1.0);
  CHECK(predicted_p(1.0, 0.1).value == doctest::Approx(1.0 / 1.1));
  CHECK_FALSE(predicted_p(1.0, 0.1).chaotic_warning);
  CHECK(predicted_p(1.0, 2.0).chaotic_warning);
  const auto bitcoin = predicted_p(600.0, 12.6);
  CHECK(bitcoin.value == doctest::Approx(0.9794).epsilon(1e-4));
  MESSAGE("predicted invalid fraction for 600 s blocks, 12.6 s delay: " << 1.0 - bitcoin.value);
  CHECK_THROWS_AS(predicted_p(0.0, 1.0), ConfigError);
}

TEST_CASE("derived_metrics") {
  auto a = derived_metrics(1.0, 2.0);
  CHECK(a.growth_rate == 0.5);
  CHECK(a.invalid_rate == 0.0);
  CHECK(a.confirmation_time == 2.0);
  auto b = derived_metrics(0.909, 1.0);
  CHECK(b.growth_rate == doctest::Approx(0.909));
  CHECK(b.invalid_rate == doctest::Approx(0.091));
  CHECK(b.confirmation_time == doctest::Approx(1.1).epsilon(1e-3));
  auto c = derived_metrics(0.5, 1.0);
  CHECK(c.growth_rate == 0.5);
  CHECK(c.invalid_rate == 0.5);
  CHECK(c.confirmation_time == 2.0);
  CHECK(c.invalid_per_valid == 1.0);
  CHECK_THROWS_AS(derived_metrics(0.0, 1.0), ConfigError);
}

TEST_CASE("default ratio grid") {
  const auto grid = default_ratio_grid();
  CHECK(grid.size() == 51);
  CHECK(grid.front() == doctest::Approx(1e-3));
  CHECK(grid.back() == doctest::Approx(1e2));
  CHECK(grid[30] == 1.0);
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
}

TEST_CASE("convergence experiment with m = 1 only") {
  ConvergencePlan plan;
  plan.base.n = 300;
  plan.ms = {1};
  plan.replications = 10;
  const auto rows = convergence_experiment(plan);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].m == 1u);
  CHECK(rows[0].estimate.mean == 1.0);
  CHECK_FALSE(rows[1].m.has_value());
  const auto csv = convergence_csv(rows);
  CHECK(csv.rfind("m,mean_p,q25,q75,replications\n1,1,1,1,10\ninf,", 0) == 0);
}

TEST_CASE("efficiency experiment") {
  EfficiencyPlan plan;
  plan.base.n = 1000;
  plan.ratios = {0.0, 0.01, 0.1, 1.0, 10.0};
  plan.replications = 20;
  const auto rows = efficiency_experiment(plan);
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].estimate.mean == 1.0);
  CHECK(rows[0].predicted == 1.0);
  for (const auto& row : rows) {
    CHECK(row.predicted == doctest::Approx(1.0 / (1.0 + row.ratio)));
    CHECK(row.beta_mean == doctest::Approx(row.ratio));
  }
  // Trend, not pairwise: fitted slope of mean p on log ratio is negative.
  std::vector<double> x, y;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    x.push_back(std::log10(rows[i].ratio));
    y.push_back(rows[i].estimate.mean);
  }
  CHECK(stats::slope(x, y) < 0.0);
  const auto csv = efficiency_csv(rows);
  CHECK(csv.rfind(std::string(kEfficiencyHeader) + "\n0,1,0,1,0,1,0\n", 0) == 0);
}

TEST_CASE("chi-squared sweeps keep shape equal to mean") {
  EfficiencyPlan plan;
  plan.base.n = 100;
  plan.base.beta = make_chi_squared(1.0);
  plan.ratios = {0.5, 2.0};
  plan.replications = 2;
  CHECK_NOTHROW(efficiency_experiment(plan));
}

TEST_CASE("histogram of a point mass") {
  HistogramPlan plan;
  plan.base.n = 200;
  plan.base.m = 10;
  plan.base.beta = make_constant(0.0);
  plan.replications = 50;
  plan.bins = 10;
  const auto r = pdf_histogram_experiment(plan);
  CHECK(r.ks_distance == 0.0);
  CHECK(r.mean_shift == 0.0);
  REQUIRE(r.edges.size() == 11);
  CHECK(r.edges.front() < 1.0);
  CHECK(r.edges.back() > 1.0);
  CHECK(r.density_bounded == r.density_unbounded);
  double mass = 0.0;
  for (std::size_t b = 0; b < 10; ++b) mass += r.density_bounded[b] * (r.edges[b + 1] - r.edges[b]);
  CHECK(mass == doctest::Approx(1.0));
}

TEST_CASE("histogram CSV shares bin edges") {
  HistogramPlan plan;
  plan.base.n = 300;
  plan.base.m = 20;
  plan.replications = 30;
  plan.bins = 8;
  const auto r = pdf_histogram_experiment(plan);
  const auto csv = histogram_csv(r);
  CHECK(csv.rfind("bin_left,bin_right,density_Am,density_Ainf\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
}

TEST_CASE("stats helpers") {
  std::vector<double> v{1, 2, 3, 4};
  CHECK(stats::quantile_sorted(v, 0.5) == 2.5);
  CHECK(stats::quantile_sorted(v, 0.25) == 1.75);
  CHECK(stats::ks_distance({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(stats::ks_distance({1, 2}, {3, 4}) == 1.0);
  CHECK(stats::ks_distance({1, 1, 2}, {1, 2, 2}) == doctest::Approx(1.0 / 3.0));
}
