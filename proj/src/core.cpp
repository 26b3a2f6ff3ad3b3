#include "adaknn/core.hpp"

#include <algorithm>
#include <cmath>

namespace adaknn {

bool within_half_box(std::span<const double> values) {
  for (double v : values) {
    if (!(std::abs(v) <= kHalf)) return false;
  }
  return true;
}

Dataset::Dataset(std::vector<double> coords, std::size_t n, std::size_t m)
    : coords_(std::move(coords)), n_(n), m_(m) {
  if (n == 0 || m == 0) throw DimensionError("dataset needs n >= 1 and m >= 1");
  if (coords_.size() != n * m) {
    throw DimensionError("dataset holds " + std::to_string(coords_.size()) +
                         " values, expected n*m = " + std::to_string(n * m));
  }
  if (!within_half_box(coords_)) {
    throw ConfigError("dataset coordinates must lie in [-1/2, 1/2]");
  }
}

Query::Query(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw DimensionError("query must have m >= 1");
  if (!within_half_box(coords_)) {
    throw ConfigError("query coordinates must lie in [-1/2, 1/2]");
  }
}

double exact_distance(std::span<const double> x, std::span<const double> xi) {
  if (x.size() != xi.size()) {
    throw DimensionError("length mismatch: " + std::to_string(x.size()) +
                         " vs " + std::to_string(xi.size()));
  }
  if (x.empty()) throw DimensionError("distance of empty vectors");
  double sum = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) sum += squared_diff(xi[j], x[j]);
  return sum / static_cast<double>(x.size());
}

void ConfidenceSpec::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0,1)");
  if (!(c_alpha > 0.0)) throw ConfigError("c_alpha must be positive");
  if (n == 0) throw ConfigError("confidence spec needs n >= 1");
  if (variant == ConfidenceVariant::Theory &&
      !(delta / static_cast<double>(n) < std::exp(-1.0))) {
    throw ConfigError(
        "theory confidence radius needs delta/n < 1/e (log log(n/delta) "
        "must be positive)");
  }
}

double theory_beta(double u, double delta_prime) {
  const double l = std::log(1.0 / delta_prime);
  return l + 3.0 * std::log(l) + 1.5 * std::log(1.0 + std::log(u));
}

double alpha_fn(std::uint64_t u, const ConfidenceSpec& spec) {
  const double uu = static_cast<double>(u);
  const double nn = static_cast<double>(spec.n);
  if (spec.variant == ConfidenceVariant::Theory) {
    return std::sqrt(2.0 * theory_beta(uu, spec.delta / nn) / uu);
  }
  return std::sqrt(spec.c_alpha *
                   std::log(1.0 + (1.0 + std::log(uu)) * nn / spec.delta) / uu);
}

ArmState update_estimate(const ArmState& state, double sample_sq_diff,
                         const ConfidenceSpec& spec) {
  if (state.exact) throw std::logic_error("update_estimate on an exact arm");
  ArmState next = state;
  next.count = state.count + 1;
  const double t = static_cast<double>(next.count);
  next.estimate = ((t - 1.0) / t) * state.estimate + sample_sq_diff / t;
  // Rounding can push a mean of values in [0,1] one ulp past 1.
  next.estimate = std::clamp(next.estimate, 0.0, 1.0);
  next.alpha = alpha_fn(next.count, spec);
  return next;
}

ArmState make_exact(const ArmState& state, double distance) {
  ArmState next = state;
  next.estimate = distance;
  next.alpha = 0.0;
  next.exact = true;
  return next;
}

}  // namespace adaknn
