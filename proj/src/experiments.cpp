#include "blocksim/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "blocksim/stats.hpp"

namespace blocksim {

PredictedP predicted_p(double alpha_mean, double beta_mean) {
  if (!(alpha_mean > 0.0) || beta_mean < 0.0) {
    throw ConfigError("predicted_p needs alpha_mean > 0 and beta_mean >= 0");
  }
  return {alpha_mean / (alpha_mean + beta_mean), beta_mean / alpha_mean > 1.0};
}

DerivedMetrics derived_metrics(double p_mean, double alpha_mean) {
  if (!(p_mean > 0.0 && p_mean <= 1.0)) throw ConfigError("derived_metrics needs 0 < p <= 1");
  if (!(alpha_mean > 0.0)) throw ConfigError("derived_metrics needs alpha_mean > 0");
  return {p_mean / alpha_mean, (1.0 - p_mean) / alpha_mean, alpha_mean / p_mean,
          (1.0 - p_mean) / p_mean};
}

std::vector<ConvergenceRow> convergence_experiment(const ConvergencePlan& plan) {
  if (plan.ms.empty()) throw ConfigError("convergence sweep needs at least one m");
  std::vector<ConvergenceRow> rows;
  std::uint64_t point = 0;
  for (std::size_t m : plan.ms) {
    ModelConfig config = plan.base;
    config.engine = Engine::matrix;
    config.m = m;
    rows.push_back({m, run_replications(config, plan.replications,
                                        point_seed(plan.seed, point++), plan.jobs, true)});
  }
  ModelConfig config = plan.base;
  config.engine = Engine::infinite;
  rows.push_back({std::nullopt, run_replications(config, plan.replications,
                                                 point_seed(plan.seed, point), plan.jobs, true)});
  return rows;
}

std::vector<double> default_ratio_grid() {
  std::vector<double> grid;
  for (int i = -30; i <= 20; ++i) grid.push_back(std::pow(10.0, i / 10.0));
  return grid;
}

std::vector<EfficiencyRow> efficiency_experiment(const EfficiencyPlan& plan) {
  if (plan.ratios.empty()) throw ConfigError("efficiency sweep needs at least one ratio");
  std::vector<EfficiencyRow> rows;
  std::uint64_t point = 0;
  for (double ratio : plan.ratios) {
    if (!(ratio >= 0.0)) throw ConfigError("ratios must be non-negative");
    ModelConfig config = plan.base;
    config.beta.mean = ratio * config.alpha.mean;
    if (config.beta.kind == DistKind::chi_squared) config.beta.shape = config.beta.mean;
    EfficiencyRow row;
    row.ratio = ratio;
    row.alpha_mean = config.alpha.mean;
    row.beta_mean = config.beta.mean;
    row.estimate = run_replications(config, plan.replications, point_seed(plan.seed, point++),
                                    plan.jobs);
    row.predicted = predicted_p(row.alpha_mean, row.beta_mean).value;
    row.abs_error = std::abs(row.estimate.mean - row.predicted);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> bin_density(const std::vector<double>& values, const std::vector<double>& edges) {
  const std::size_t bins = edges.size() - 1;
  std::vector<double> density(bins, 0.0);
  const double lo = edges.front();
  const double width = (edges.back() - lo) / static_cast<double>(bins);
  for (double v : values) {
    auto b = static_cast<std::size_t>(std::clamp((v - lo) / width, 0.0, static_cast<double>(bins - 1)));
    density[b] += 1.0;
  }
  for (auto& d : density) d /= static_cast<double>(values.size()) * width;
  return density;
}

HistogramResult pdf_histogram_experiment(const HistogramPlan& plan) {
  if (plan.bins < 1) throw ConfigError("histogram needs at least one bin");
  ModelConfig bounded = plan.base;
  bounded.engine = Engine::matrix;
  ModelConfig unbounded = plan.base;
  unbounded.engine = Engine::infinite;

  HistogramResult out;
  out.values_bounded = replicate(bounded, plan.replications, point_seed(plan.seed, 0), plan.jobs);
  out.values_unbounded =
      replicate(unbounded, plan.replications, point_seed(plan.seed, 1), plan.jobs);

  auto [amin, amax] = std::minmax_element(out.values_bounded.begin(), out.values_bounded.end());
  auto [bmin, bmax] = std::minmax_element(out.values_unbounded.begin(), out.values_unbounded.end());
  double lo = std::min(*amin, *bmin);
  double hi = std::max(*amax, *bmax);
  if (hi == lo) {
    // Point mass: spread the bins over a 0.01-wide range around it.
    lo -= 0.005;
    hi += 0.005;
  }
  const std::size_t bins = plan.bins;
  out.edges.resize(bins + 1);
  for (std::size_t b = 0; b <= bins; ++b) {
    out.edges[b] = lo + (hi - lo) * static_cast<double>(b) / static_cast<double>(bins);
  }
  out.density_bounded = bin_density(out.values_bounded, out.edges);
  out.density_unbounded = bin_density(out.values_unbounded, out.edges);
  out.ks_distance = stats::ks_distance(out.values_bounded, out.values_unbounded);
  out.mean_shift = stats::mean(out.values_bounded) - stats::mean(out.values_unbounded);
  return out;
}

std::string format_number(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream out;
  out << kConvergenceHeader << '\n';
  for (const auto& row : rows) {
    out << (row.m ? std::to_string(*row.m) : std::string("inf")) << ','
        << format_number(row.estimate.mean) << ',' << format_number(row.estimate.q25) << ','
        << format_number(row.estimate.q75) << ',' << row.estimate.replications << '\n';
  }
  return out.str();
}

std::string efficiency_csv(const std::vector<EfficiencyRow>& rows) {
  std::ostringstream out;
  out << kEfficiencyHeader << '\n';
  for (const auto& row : rows) {
    out << format_number(row.ratio) << ',' << format_number(row.alpha_mean) << ','
        << format_number(row.beta_mean) << ',' << format_number(row.estimate.mean) << ','
        << format_number(row.estimate.std_error) << ',' << format_number(row.predicted) << ','
        << format_number(row.abs_error) << '\n';
  }
  return out.str();
}

std::string histogram_csv(const HistogramResult& result) {
  std::ostringstream out;
  out << kHistogramHeader << '\n';
  for (std::size_t b = 0; b + 1 < result.edges.size(); ++b) {
    out << format_number(result.edges[b]) << ',' << format_number(result.edges[b + 1]) << ','
        << format_number(result.density_bounded[b]) << ','
        << format_number(result.density_unbounded[b]) << '\n';
  }
  return out.str();
}

}  // namespace blocksim
