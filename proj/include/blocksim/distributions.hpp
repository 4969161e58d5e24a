#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "blocksim/random.hpp"

namespace blocksim {

/// Raised for invalid model or command-line configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class DistKind { exponential, gamma, chi_squared, constant };

/// Role a distribution plays in the model. Production times must be
/// strictly positive; broadcast delays may be zero.
enum class DistRole { production, delay };

/// A parameterized distribution of times.
///
/// Gamma is parameterized by (shape, mean) with scale = mean / shape.
/// Chi-squared keeps its degrees of freedom in `shape` and its mean equals
/// them; `make_chi_squared` keeps the two in sync.
struct DistributionSpec {
  DistKind kind = DistKind::exponential;
  double mean = 1.0;
  double shape = 1.0;

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

DistributionSpec make_exponential(double mean);
DistributionSpec make_gamma(double mean, double shape);
DistributionSpec make_chi_squared(double dof);
DistributionSpec make_constant(double value);

/// Throws ConfigError when `spec` is not usable in `role`.
void validate(const DistributionSpec& spec, DistRole role);

std::string_view kind_name(DistKind kind);
DistKind parse_kind(std::string_view name);

/// Parses the flag syntax `kind:mean` or `kind:mean:shape`
/// (kinds: exp, exponential, gamma, chi2, chi_squared, const, constant).
DistributionSpec parse_distribution(std::string_view text);

/// Inverse of parse_distribution (canonical kind names).
std::string format_distribution(const DistributionSpec& spec);

/// Inverse CDF at u in (0, 1).
double quantile(const DistributionSpec& spec, double u);

/// One draw. Consumes exactly one uniform from `stream` for every kind,
/// including constant (whose draw is discarded).
inline double sample(const DistributionSpec& spec, UniformSource& stream) {
  return quantile(spec, stream.next());
}

/// P(X <= r).
double cdf(const DistributionSpec& spec, double r);

/// CDF of an entry drawn uniformly from an m-column delay matrix row set:
/// zero with probability 1/m, otherwise a delay draw.
double mixture_cdf(const DistributionSpec& spec, std::size_t m, double r);

/// Uniform bound 2/m on |mixture_cdf - cdf|.
double sup_gap_bound(std::size_t m);

}  // namespace blocksim
