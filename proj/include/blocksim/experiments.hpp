#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "blocksim/montecarlo.hpp"

namespace blocksim {

/// alpha / (alpha + beta): expected proportion of valid blocks with
/// unbounded workers outside the chaotic regime.
struct PredictedP {
  double value = 1.0;
  bool chaotic_warning = false;  // beta/alpha > 1: prediction is unreliable
};

PredictedP predicted_p(double alpha_mean, double beta_mean);

/// Quantities that follow from a mean proportion of valid blocks.
struct DerivedMetrics {
  double growth_rate = 0.0;        // p / alpha: longest-branch blocks per time unit
  double invalid_rate = 0.0;       // (1 - p) / alpha: invalid blocks per time unit
  double confirmation_time = 0.0;  // alpha / p
  double invalid_per_valid = 0.0;  // (1 - p) / p: mean invalid blocks per valid block
};

DerivedMetrics derived_metrics(double p_mean, double alpha_mean);

// Mean A_m versus A_infinity as m grows.
struct ConvergencePlan {
  ModelConfig base;  // alpha, beta and n; engine and m are set per point
  std::vector<std::size_t> ms{1, 2, 5, 10, 20, 50, 100, 200, 500, 1000};
  std::size_t replications = 100;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

struct ConvergenceRow {
  std::optional<std::size_t> m;  // nullopt: unbounded workers
  McEstimate estimate;
};

/// One row per m (matrix engine) followed by the unbounded reference row.
std::vector<ConvergenceRow> convergence_experiment(const ConvergencePlan& plan);

// Mean p versus beta/alpha against the predicted curve.
struct EfficiencyPlan {
  ModelConfig base;  // beta.kind and beta.shape are kept; beta.mean is swept
  std::vector<double> ratios;
  std::size_t replications = 100;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

/// Log grid 1e-3 .. 1e2 with ten steps per decade, both ends included.
std::vector<double> default_ratio_grid();

struct EfficiencyRow {
  double ratio = 0.0;
  double alpha_mean = 0.0;
  double beta_mean = 0.0;
  McEstimate estimate;
  double predicted = 0.0;
  double abs_error = 0.0;
};

std::vector<EfficiencyRow> efficiency_experiment(const EfficiencyPlan& plan);

// Distribution of outcomes of A_m and A_infinity on shared bins.
struct HistogramPlan {
  ModelConfig base;  // m taken from base.m
  std::size_t replications = 1000;
  std::size_t bins = 40;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

struct HistogramResult {
  std::vector<double> edges;  // bins + 1 edges
  std::vector<double> density_bounded;
  std::vector<double> density_unbounded;
  std::vector<double> values_bounded;
  std::vector<double> values_unbounded;
  double ks_distance = 0.0;
  double mean_shift = 0.0;  // mean(A_m) - mean(A_infinity)
};

HistogramResult pdf_histogram_experiment(const HistogramPlan& plan);

/// Densities of `values` over the bins given by `edges` (last bin closed).
std::vector<double> bin_density(const std::vector<double>& values, const std::vector<double>& edges);

// CSV schemas. Numbers use the shortest round-trip representation.
inline constexpr const char* kConvergenceHeader = "m,mean_p,q25,q75,replications";
inline constexpr const char* kEfficiencyHeader =
    "ratio,alpha_mean,beta_mean,mean_p,std_err,predicted_p,abs_error";
inline constexpr const char* kHistogramHeader = "bin_left,bin_right,density_Am,density_Ainf";

std::string convergence_csv(const std::vector<ConvergenceRow>& rows);
std::string efficiency_csv(const std::vector<EfficiencyRow>& rows);
std::string histogram_csv(const HistogramResult& result);

std::string format_number(double value);

}  // namespace blocksim
