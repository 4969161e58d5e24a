#pragma once

#include <functional>
#include <span>
#include <vector>

namespace blocksim::stats {

double mean(std::span<const double> values);

/// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
double sample_sd(std::span<const double> values);

/// Linear-interpolation quantile (Hyndman-Fan type 7) of sorted values.
double quantile_sorted(std::span<const double> sorted, double level);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_distance(std::vector<double> a, std::vector<double> b);

/// One-sample Kolmogorov-Smirnov statistic against a continuous CDF.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);

/// Least-squares slope of y on x.
double slope(std::span<const double> x, std::span<const double> y);

}  // namespace blocksim::stats
