#pragma once

// Adaptive k-NN driver. Estimates every normalized squared distance from
// one random coordinate, then repeatedly refines the close arm with the
// highest upper bound and the widest of {far arm with the lowest lower
// bound, mid arms} until the close set's upper bounds sit below the far
// set's lower bounds. Returns the k + h arms not in the far set.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "adaknn/core.hpp"
#include "adaknn/heaps.hpp"
#include "adaknn/sampling.hpp"

namespace adaknn {

struct RunConfig {
  std::size_t k = 10;
  std::size_t h = 10;
  double delta = 0.001;
  ConfidenceVariant variant = ConfidenceVariant::Experimental;
  double c_alpha = 1.0;
  SamplingMode sampling_mode = SamplingMode::WithReplacement;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> max_iterations;

  ConfidenceSpec confidence(std::size_t n) const {
    return ConfidenceSpec{variant, delta, n, c_alpha};
  }
};

struct RunReport {
  std::vector<std::size_t> result_set;  // ascending point indices
  std::uint64_t total_coordinate_evals = 0;
  std::uint64_t exact_recompute_evals = 0;  // part of the total
  std::uint64_t iterations = 0;
  std::vector<std::uint64_t> per_arm_counts;
  std::size_t exact_arm_count = 0;
  std::uint64_t heap_moves = 0;     // after the initial build
  std::size_t max_swaps = 0;        // largest single restore
  bool degenerate = false;          // k + h >= n, nothing sampled
  std::size_t n = 0;
  std::size_t m = 0;
  std::chrono::nanoseconds wall_time{0};
};

/// Thrown when RunConfig::max_iterations is hit; carries the state so far.
class IterationLimitError : public std::runtime_error {
 public:
  explicit IterationLimitError(RunReport partial)
      : std::runtime_error("adaptive k-NN exceeded max_iterations"),
        partial_(std::move(partial)) {}
  const RunReport& partial() const { return partial_; }

 private:
  RunReport partial_;
};

enum class StepStatus { Continue, Terminated };

/// One adaptive search. Construction performs the initialization round;
/// step() runs one iteration.
class AdaptiveKnn {
 public:
  /// Throws DimensionError on a width mismatch and ConfigError on a bad
  /// configuration. Requires k + h < n; use run() for the degenerate case.
  AdaptiveKnn(const Dataset& data, const Query& query, const RunConfig& cfg);

  StepStatus step();
  bool terminated() const { return terminated_; }
  /// d1.ucb <= d2.lcb for the current d1, d2.
  bool termination_holds() const;

  const HeapBank& bank() const { return bank_; }
  std::uint64_t total_coordinate_evals() const { return evals_; }
  std::uint64_t iterations() const { return iterations_; }

  RunReport report() const;

 private:
  std::vector<ArmState> initialize();
  void pull(std::size_t arm);
  void finalize_exact(std::size_t arm, ArmState state);

  const Dataset& data_;
  const Query& query_;
  RunConfig cfg_;
  ConfidenceSpec conf_;
  std::vector<CoordinateSampler> samplers_;
  std::uint64_t evals_ = 0;
  std::uint64_t recompute_evals_ = 0;
  std::uint64_t iterations_ = 0;
  std::size_t max_swaps_ = 0;
  bool terminated_ = false;
  std::chrono::steady_clock::time_point start_;
  HeapBank bank_;  // built last: its initializer runs the first round
  std::uint64_t base_moves_ = 0;
};

/// Full search. k + h >= n returns every index with zero sampling and
/// degenerate = true.
RunReport run(const Dataset& data, const Query& query, const RunConfig& cfg);

/// total_coordinate_evals / (n * m).
double sample_fraction(const RunReport& report);

}  // namespace adaknn
