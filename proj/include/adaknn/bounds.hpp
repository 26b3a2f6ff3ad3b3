#pragma once

// Instance-dependent complexity scores computed from the sorted true
// distances d_1 <= ... <= d_n (1-based in the comments below; vectors are
// 0-based). Gap Delta_{i,j} = |d_i - d_j|.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "adaknn/core.hpp"

namespace adaknn {

struct GapProfile {
  std::vector<double> sorted_distances;
  std::size_t k = 1;
  std::size_t h = 0;
  std::size_t m = 1;

  /// Throws DomainError if distances are unsorted or leave [0,1], or if
  /// k < 1, k + h >= n or m < 1.
  void validate() const;
  std::size_t n() const { return sorted_distances.size(); }
  /// 1-based access matching the formulas.
  double d(std::size_t i) const { return sorted_distances[i - 1]; }
};

/// Builds a profile by sorting arbitrary distances.
GapProfile make_profile(std::vector<double> distances, std::size_t k, std::size_t h,
                        std::size_t m);

/// min(gap^-2, m), with a zero gap counted as m.
double capped_inverse_square(double gap, std::size_t m);

/// Upper complexity score without hidden constants or log factors:
///   sum_{i<=k} min(D_{i,k+1+h}^-2, m) + sum_{i>=k+1+h} min(D_{k,i}^-2, m)
///   + h * min(D_{k,k+1+h}^-2, m).
double upper_score(const GapProfile& profile);

struct LowerBound {
  double value = 0.0;
  bool vacuous = false;  // a zero gap in one of the sums; value is +inf
};

/// Lower bound for algorithms that only sample coordinates:
///   c' * (sum_{i<=k-h} D_{i,k+1+h}^-2 + sum_{i>=k+1+h} D_{k-h,i}^-2),
///   c' = log(1/(2 delta)) * min_{l in {k-h, k+1+h}} d_l (1 - d_l).
/// Throws DomainError unless h < k and delta in (0, 0.14].
LowerBound lower_bound(const GapProfile& profile, double delta);

/// Per-arm gap used by the sample-count argument: d_{k+1+h} - d_i for the
/// first k, d_i - d_k for the last n-k-h, d_{k+1+h} - d_k in between.
std::vector<double> per_arm_gaps(const GapProfile& profile);

/// Search ceiling for min_samples_for_gap.
constexpr std::uint64_t kMaxSampleSearch = 1'000'000'000ULL;

/// Smallest u >= 1 with alpha(u) <= gap/8, or nullopt when no
/// u <= kMaxSampleSearch qualifies. Throws DomainError for gap <= 0.
std::optional<std::uint64_t> min_samples_for_gap(double gap, const ConfidenceSpec& spec);

/// Explicit ceiling on that count for the Theory radius:
///   (c2 / gap^2) * log(125 (n/delta) log(1.12 * 128 / gap^2)),
///   c2 = 128 / (1 - 2/log(1.12 * 32)) + 1.
double fixed_point_ceiling(double gap, std::size_t n, double delta);
double fixed_point_c2();

struct ComplexityReport {
  double upper_score = 0.0;
  std::optional<LowerBound> lower_bound;  // absent when h >= k or delta > 0.14
  std::vector<std::uint64_t> per_arm_fixed_points;  // capped at m
  bool fact2_bound_ok = true;
};

/// All scores for one profile, using the Theory radius with this delta.
ComplexityReport complexity_report(const GapProfile& profile, double delta);

struct BoundRelation {
  double upper_2h = 0.0;       // upper score with buffer 2h
  LowerBound lower_h;          // lower bound with buffer h
  bool endpoints_equal = false;  // d_{k-h} == d_k
  bool finite_nonnegative = false;
};

/// Pairs the upper score at 2h with the lower bound at h. Requires
/// h < k and k + 2h < n.
BoundRelation bound_relation_check(const GapProfile& profile, double delta);

}  // namespace adaknn
