#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace adaknn {

/// SplitMix64. Small state, so one stream per arm stays cheap.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Deterministic child seed for stream `index` of `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// Uniform integer in [0, bound), bound >= 1. Lemire's multiply-shift with
/// rejection, so results do not depend on the standard library.
std::uint64_t uniform_below(SplitMix64& rng, std::uint64_t bound);

enum class SamplingMode { WithReplacement, WithoutReplacement };

struct ExhaustionError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Coordinate sampler owned by one arm. Without replacement it keeps a
/// lazily allocated index array and shuffles it one draw at a time.
class CoordinateSampler {
 public:
  CoordinateSampler() = default;
  CoordinateSampler(std::uint64_t seed, std::size_t m, SamplingMode mode)
      : rng_(seed), m_(m), mode_(mode) {}

  /// Next coordinate index. Throws ExhaustionError once all m indices are
  /// consumed in WithoutReplacement mode.
  std::size_t next();

  std::size_t consumed() const { return consumed_; }
  std::size_t m() const { return m_; }
  SamplingMode mode() const { return mode_; }

 private:
  SplitMix64 rng_;
  std::size_t m_ = 1;
  SamplingMode mode_ = SamplingMode::WithReplacement;
  std::size_t consumed_ = 0;
  std::vector<std::uint32_t> perm_;
};

}  // namespace adaknn
