#include "blocksim/distributions.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <charconv>
#include <cmath>
#include <vector>

namespace blocksim {

DistributionSpec make_exponential(double mean) { return {DistKind::exponential, mean, 1.0}; }

DistributionSpec make_gamma(double mean, double shape) { return {DistKind::gamma, mean, shape}; }

DistributionSpec make_chi_squared(double dof) { return {DistKind::chi_squared, dof, dof}; }

DistributionSpec make_constant(double value) { return {DistKind::constant, value, 1.0}; }

void validate(const DistributionSpec& spec, DistRole role) {
  if (!std::isfinite(spec.mean) || !std::isfinite(spec.shape)) {
    throw ConfigError("distribution parameters must be finite");
  }
  if (role == DistRole::production && !(spec.mean > 0.0)) {
    throw ConfigError("production-time distribution needs a positive mean");
  }
  if (spec.mean < 0.0) {
    throw ConfigError("delay distribution needs a non-negative mean");
  }
  switch (spec.kind) {
    case DistKind::gamma:
    case DistKind::chi_squared:
      if (!(spec.shape > 0.0)) throw ConfigError("gamma/chi-squared shape must be positive");
      if (!(spec.mean > 0.0)) throw ConfigError("gamma/chi-squared mean must be positive");
      if (spec.kind == DistKind::chi_squared && spec.mean != spec.shape) {
        throw ConfigError("chi-squared mean must equal its degrees of freedom");
      }
      break;
    case DistKind::exponential:
    case DistKind::constant:
      break;
  }
}

std::string_view kind_name(DistKind kind) {
  switch (kind) {
    case DistKind::exponential: return "exponential";
    case DistKind::gamma: return "gamma";
    case DistKind::chi_squared: return "chi_squared";
    case DistKind::constant: return "constant";
  }
  return "?";
}

DistKind parse_kind(std::string_view name) {
  if (name == "exp" || name == "exponential") return DistKind::exponential;
  if (name == "gamma") return DistKind::gamma;
  if (name == "chi2" || name == "chi_squared") return DistKind::chi_squared;
  if (name == "const" || name == "constant") return DistKind::constant;
  throw ConfigError("unknown distribution kind '" + std::string(name) + "'");
}

namespace {

double parse_number(std::string_view text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("not a number: '" + std::string(text) + "'");
  }
  return value;
}

std::string shortest(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

}  // namespace

DistributionSpec parse_distribution(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto colon = text.find(':', start);
    parts.push_back(text.substr(start, colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.size() < 2 || parts.size() > 3) {
    throw ConfigError("distribution must be kind:mean or kind:mean:shape, got '" +
                      std::string(text) + "'");
  }
  DistributionSpec spec;
  spec.kind = parse_kind(parts[0]);
  spec.mean = parse_number(parts[1]);
  if (parts.size() == 3) {
    spec.shape = parse_number(parts[2]);
  } else if (spec.kind == DistKind::chi_squared) {
    spec.shape = spec.mean;
  } else if (spec.kind == DistKind::gamma) {
    throw ConfigError("gamma needs a shape: gamma:mean:shape");
  }
  return spec;
}

std::string format_distribution(const DistributionSpec& spec) {
  std::string out(kind_name(spec.kind));
  out += ':' + shortest(spec.mean);
  if (spec.kind == DistKind::gamma || spec.kind == DistKind::chi_squared) {
    out += ':' + shortest(spec.shape);
  }
  return out;
}

double quantile(const DistributionSpec& spec, double u) {
  switch (spec.kind) {
    case DistKind::exponential:
      return -spec.mean * std::log1p(-u);
    case DistKind::gamma:
      return boost::math::gamma_p_inv(spec.shape, u) * (spec.mean / spec.shape);
    case DistKind::chi_squared:
      return boost::math::gamma_p_inv(0.5 * spec.shape, u) * 2.0;
    case DistKind::constant:
      return spec.mean;
  }
  return 0.0;
}

double cdf(const DistributionSpec& spec, double r) {
  if (r < 0.0) return 0.0;
  switch (spec.kind) {
    case DistKind::exponential:
      if (spec.mean == 0.0) return 1.0;
      return -std::expm1(-r / spec.mean);
    case DistKind::gamma:
      if (std::isinf(r)) return 1.0;
      return boost::math::gamma_p(spec.shape, r / (spec.mean / spec.shape));
    case DistKind::chi_squared:
      if (std::isinf(r)) return 1.0;
      return boost::math::gamma_p(0.5 * spec.shape, 0.5 * r);
    case DistKind::constant:
      return r >= spec.mean ? 1.0 : 0.0;
  }
  return 0.0;
}

double mixture_cdf(const DistributionSpec& spec, std::size_t m, double r) {
  if (m == 0) throw ConfigError("mixture_cdf needs m >= 1");
  if (r < 0.0) return 0.0;
  const double inv_m = 1.0 / static_cast<double>(m);
  return inv_m + (static_cast<double>(m - 1) * inv_m) * cdf(spec, r);
}

double sup_gap_bound(std::size_t m) {
  if (m == 0) throw ConfigError("sup_gap_bound needs m >= 1");
  return 2.0 / static_cast<double>(m);
}

}  // namespace blocksim
