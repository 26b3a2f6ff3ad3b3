#pragma once

// Distances, the running estimator and the anytime confidence radius.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace adaknn {

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// n points in m dimensions, row-major, every coordinate in [-1/2, 1/2].
class Dataset {
 public:
  Dataset() = default;
  /// Throws DimensionError on a shape mismatch and ConfigError when a
  /// coordinate lies outside [-1/2, 1/2].
  Dataset(std::vector<double> coords, std::size_t n, std::size_t m);

  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }
  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * m_, m_};
  }
  double at(std::size_t i, std::size_t j) const { return coords_[i * m_ + j]; }
  const std::vector<double>& coords() const { return coords_; }

 private:
  std::vector<double> coords_;
  std::size_t n_ = 0;
  std::size_t m_ = 0;
};

/// Query point with coordinates in [-1/2, 1/2].
class Query {
 public:
  Query() = default;
  explicit Query(std::vector<double> coords);

  std::size_t m() const { return coords_.size(); }
  std::span<const double> coords() const { return coords_; }
  double operator[](std::size_t j) const { return coords_[j]; }

 private:
  std::vector<double> coords_;
};

constexpr double kHalf = 0.5;

/// True when every value has absolute value at most 1/2.
bool within_half_box(std::span<const double> values);

/// (1/m) * sum_j (xi_j - x_j)^2.
double exact_distance(std::span<const double> x, std::span<const double> xi);

inline double squared_diff(double a, double b) {
  const double d = a - b;
  return d * d;
}

enum class ConfidenceVariant { Theory, Experimental };

/// Parameters of the confidence radius alpha(u).
///
/// Theory:       alpha(u) = sqrt(2 beta(u, delta/n) / u),
///               beta(u, d') = log(1/d') + 3 log log(1/d') + 1.5 log(1 + log u)
/// Experimental: alpha(u) = sqrt(c_alpha * log(1 + (1 + log u) n / delta) / u)
struct ConfidenceSpec {
  ConfidenceVariant variant = ConfidenceVariant::Experimental;
  double delta = 0.001;
  std::size_t n = 2;
  double c_alpha = 1.0;

  /// Throws ConfigError unless delta is in (0,1), c_alpha > 0, n >= 1 and,
  /// for the Theory variant, delta/n < 1/e.
  void validate() const;
};

/// beta(u, delta') of the Theory radius.
double theory_beta(double u, double delta_prime);

/// Confidence radius after u >= 1 samples. Does not re-validate the spec.
double alpha_fn(std::uint64_t u, const ConfidenceSpec& spec);

/// Per-arm estimator state.
struct ArmState {
  double estimate = 0.0;
  std::uint64_t count = 0;
  double alpha = std::numeric_limits<double>::infinity();
  bool exact = false;

  double lcb() const { return estimate - alpha; }
  double ucb() const { return estimate + alpha; }
};

/// Folds one squared coordinate difference into the running mean and
/// refreshes alpha. Throws std::logic_error on an exact arm.
ArmState update_estimate(const ArmState& state, double sample_sq_diff,
                         const ConfidenceSpec& spec);

/// Marks an arm exact with the given true distance.
ArmState make_exact(const ArmState& state, double distance);

}  // namespace adaknn
