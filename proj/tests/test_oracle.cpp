#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "adaknn/oracle.hpp"

using namespace adaknn;

namespace {

// Independent O(n^2) selection: repeatedly take the smallest unused
// (distance, index) pair.
std::vector<std::size_t> double_loop_order(const std::vector<double>& d) {
  std::vector<bool> used(d.size(), false);
  std::vector<std::size_t> order;
  for (std::size_t r = 0; r < d.size(); ++r) {
    std::size_t best = d.size();
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (used[i]) continue;
      if (best == d.size() || d[i] < d[best]) best = i;
    }
    used[best] = true;
    order.push_back(best);
  }
  return order;
}

}  // namespace

TEST_CASE("brute force on a small hand example") {
  const Dataset data({0.0, 0.5, -0.5, 0.1}, 4, 1);
  const Query q({0.0});
  const auto r = brute_force(data, q, 2);
  CHECK(r.sorted_indices == std::vector<std::size_t>{0, 3, 1, 2});
  CHECK(r.k_set == std::vector<std::size_t>{0, 3});
  CHECK(r.distances[1] == 0.25);
  CHECK(r.distances[3] == doctest::Approx(0.01));
}

TEST_CASE("ties go to the lower index") {
  const Dataset data({0.2, -0.2, 0.2}, 3, 1);
  const auto r = brute_force(data, Query({0.0}), 1);
  CHECK(r.sorted_indices == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("errors") {
  const Dataset data({0.0, 0.0}, 1, 2);
  CHECK_THROWS_AS(brute_force(data, Query({0.0}), 1), DimensionError);
  CHECK_THROWS_AS(brute_force(data, Query({0.0, 0.0}), 0), std::out_of_range);
  CHECK_THROWS_AS(brute_force(data, Query({0.0, 0.0}), 2), std::out_of_range);
}

TEST_CASE("agrees with a double-loop selection on random data") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> coord(-0.5, 0.5);
  std::uniform_int_distribution<int> coarse(-2, 2);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 5 + rep * 3, m = 1 + rep % 7;
    std::vector<double> xs(n * m), x(m);
    // Coarse grid on odd reps to force ties.
    auto draw = [&] { return rep % 2 ? coarse(gen) * 0.25 : coord(gen); };
    for (auto& v : xs) v = draw();
    for (auto& v : x) v = draw();
    const Dataset data(xs, n, m);
    const Query q(x);
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < m; ++j) s += (xs[i * m + j] - x[j]) * (xs[i * m + j] - x[j]);
      d[i] = s / m;
    }
    const auto r = brute_force(data, q, n / 2);
    CHECK(r.sorted_indices == double_loop_order(d));
    for (std::size_t i = 0; i < n; ++i) CHECK(r.distances[i] == doctest::Approx(d[i]).epsilon(1e-14));
  }
}

TEST_CASE("recall") {
  const std::vector<std::size_t> truth{1, 2, 3, 4};
  CHECK(recall(std::vector<std::size_t>{1, 2, 3, 4, 9}, truth) == 1.0);
  CHECK(recall(std::vector<std::size_t>{4, 7}, truth) == 0.25);
  CHECK(recall(std::vector<std::size_t>{}, truth) == 0.0);
}
