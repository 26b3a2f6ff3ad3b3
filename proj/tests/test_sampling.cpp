#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <vector>

#include "adaknn/sampling.hpp"

using namespace adaknn;

TEST_CASE("m = 1 always yields index 0") {
  CoordinateSampler with(1, 1, SamplingMode::WithReplacement);
  for (int t = 0; t < 100; ++t) CHECK(with.next() == 0);
  CoordinateSampler without(1, 1, SamplingMode::WithoutReplacement);
  CHECK(without.next() == 0);
  CHECK_THROWS_AS(without.next(), ExhaustionError);
}

TEST_CASE("without replacement draws a permutation, then exhausts") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    CoordinateSampler s(seed, 5, SamplingMode::WithoutReplacement);
    std::vector<std::size_t> got;
    for (int t = 0; t < 5; ++t) got.push_back(s.next());
    std::sort(got.begin(), got.end());
    CHECK(got == std::vector<std::size_t>{0, 1, 2, 3, 4});
    CHECK(s.consumed() == 5);
    CHECK_THROWS_AS(s.next(), ExhaustionError);
  }
}

TEST_CASE("with replacement is uniform") {
  const std::size_t m = 10;
  const int draws = 100000;
  CoordinateSampler s(2024, m, SamplingMode::WithReplacement);
  std::vector<int> freq(m, 0);
  for (int t = 0; t < draws; ++t) ++freq[s.next()];
  const double expected = static_cast<double>(draws) / m;
  const double sigma = std::sqrt(draws * (1.0 / m) * (1.0 - 1.0 / m));
  double chi2 = 0.0;
  for (int f : freq) {
    CHECK(std::abs(f - expected) <= 5.0 * sigma);
    chi2 += (f - expected) * (f - expected) / expected;
  }
  // 9 degrees of freedom; 99.99th percentile is about 33.7.
  CHECK(chi2 < 33.7);
}

TEST_CASE("without replacement first draw is uniform across seeds") {
  const std::size_t m = 8;
  std::vector<int> freq(m, 0);
  const int seeds = 80000;
  for (int seed = 0; seed < seeds; ++seed) {
    CoordinateSampler s(derive_seed(7, seed), m, SamplingMode::WithoutReplacement);
    ++freq[s.next()];
  }
  const double expected = static_cast<double>(seeds) / m;
  const double sigma = std::sqrt(seeds * (1.0 / m) * (1.0 - 1.0 / m));
  for (int f : freq) CHECK(std::abs(f - expected) <= 5.0 * sigma);
}

TEST_CASE("uniform_below stays in range and derive_seed separates streams") {
  SplitMix64 rng(1);
  for (std::uint64_t bound : {1ULL, 2ULL, 3ULL, 1000ULL, (1ULL << 63) + 5}) {
    for (int t = 0; t < 1000; ++t) CHECK(uniform_below(rng, bound) < bound);
  }
  std::set<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 10000; ++i) seeds.insert(derive_seed(42, i));
  CHECK(seeds.size() == 10000);
  CHECK(derive_seed(42, 3) == derive_seed(42, 3));
  CHECK(derive_seed(42, 3) != derive_seed(43, 3));
}
