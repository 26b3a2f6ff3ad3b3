#include "adaknn/algorithm.hpp"

#include <numeric>
#include <string>

namespace adaknn {

namespace {

void check_inputs(const Dataset& data, const Query& query, const RunConfig& cfg) {
  if (query.m() != data.m()) {
    throw DimensionError("query has " + std::to_string(query.m()) +
                         " coordinates, dataset has " + std::to_string(data.m()));
  }
  if (cfg.k == 0) throw ConfigError("k must be at least 1");
}

}  // namespace

AdaptiveKnn::AdaptiveKnn(const Dataset& data, const Query& query, const RunConfig& cfg)
    : data_(data),
      query_(query),
      cfg_(cfg),
      conf_(cfg.confidence(data.n())),
      bank_((check_inputs(data, query, cfg), conf_.validate(), initialize()), cfg.k,
            cfg.h) {
  base_moves_ = bank_.moves();
}

std::vector<ArmState> AdaptiveKnn::initialize() {
  start_ = std::chrono::steady_clock::now();
  const std::size_t n = data_.n();
  if (cfg_.k + cfg_.h >= n) {
    throw ConfigError("k + h must be smaller than n");
  }
  samplers_.reserve(n);
  std::vector<ArmState> arms(n);
  for (std::size_t i = 0; i < n; ++i) {
    samplers_.emplace_back(derive_seed(cfg_.seed, i), data_.m(), cfg_.sampling_mode);
    const std::size_t j = samplers_[i].next();
    ++evals_;
    arms[i] = update_estimate(arms[i], squared_diff(data_.at(i, j), query_[j]), conf_);
    if (arms[i].count == data_.m()) {
      if (cfg_.sampling_mode == SamplingMode::WithReplacement) {
        evals_ += data_.m();
        recompute_evals_ += data_.m();
      }
      arms[i] = make_exact(arms[i], exact_distance(query_.coords(), data_.point(i)));
    }
  }
  return arms;
}

void AdaptiveKnn::finalize_exact(std::size_t arm, ArmState state) {
  if (cfg_.sampling_mode == SamplingMode::WithReplacement) {
    evals_ += data_.m();
    recompute_evals_ += data_.m();
  }
  // Without replacement all m coordinates have been seen, so the running
  // mean already equals the distance up to rounding; the exact value is
  // taken without charging further evaluations.
  bank_.update_arm(arm, make_exact(state, exact_distance(query_.coords(), data_.point(arm))));
}

void AdaptiveKnn::pull(std::size_t arm) {
  const ArmState& current = bank_.arm(arm);
  if (current.exact) return;
  const std::size_t j = samplers_[arm].next();
  ++evals_;
  const ArmState next =
      update_estimate(current, squared_diff(data_.at(arm, j), query_[j]), conf_);
  if (next.count >= data_.m()) {
    finalize_exact(arm, next);
  } else {
    bank_.update_arm(arm, next);
  }
}

bool AdaptiveKnn::termination_holds() const {
  const ArmState& d1 = bank_.arm(bank_.peek_d1());
  const ArmState& d2 = bank_.arm(bank_.peek_d2());
  return d1.ucb() <= d2.lcb();
}

StepStatus AdaptiveKnn::step() {
  if (terminated_) return StepStatus::Terminated;
  if (termination_holds()) {
    terminated_ = true;
    return StepStatus::Terminated;
  }
  const std::size_t d1 = bank_.peek_d1();
  const std::size_t b2 = bank_.peek_b2();
  pull(d1);
  pull(b2);
  max_swaps_ = std::max(max_swaps_, bank_.restore_ordering());
  ++iterations_;
  if (termination_holds()) {
    terminated_ = true;
    return StepStatus::Terminated;
  }
  if (cfg_.max_iterations && iterations_ >= *cfg_.max_iterations) {
    throw IterationLimitError(report());
  }
  return StepStatus::Continue;
}

RunReport AdaptiveKnn::report() const {
  RunReport r;
  r.n = data_.n();
  r.m = data_.m();
  for (std::size_t i = 0; i < data_.n(); ++i) {
    if (bank_.partition_of(i) != Partition::Far) r.result_set.push_back(i);
  }
  r.total_coordinate_evals = evals_;
  r.exact_recompute_evals = recompute_evals_;
  r.iterations = iterations_;
  r.per_arm_counts.reserve(data_.n());
  for (const ArmState& a : bank_.arms()) {
    r.per_arm_counts.push_back(a.count);
    r.exact_arm_count += a.exact ? 1 : 0;
  }
  r.heap_moves = bank_.moves() - base_moves_;
  r.max_swaps = max_swaps_;
  r.wall_time = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::steady_clock::now() - start_);
  return r;
}

RunReport run(const Dataset& data, const Query& query, const RunConfig& cfg) {
  check_inputs(data, query, cfg);
  if (cfg.k + cfg.h >= data.n()) {
    RunReport r;
    r.n = data.n();
    r.m = data.m();
    r.degenerate = true;
    r.result_set.resize(data.n());
    std::iota(r.result_set.begin(), r.result_set.end(), std::size_t{0});
    r.per_arm_counts.assign(data.n(), 0);
    return r;
  }
  AdaptiveKnn search(data, query, cfg);
  while (search.step() == StepStatus::Continue) {
  }
  return search.report();
}

double sample_fraction(const RunReport& report) {
  if (report.n == 0 || report.m == 0) return 0.0;
  return static_cast<double>(report.total_coordinate_evals) /
         (static_cast<double>(report.n) * static_cast<double>(report.m));
}

}  // namespace adaknn
