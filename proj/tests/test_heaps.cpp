#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "adaknn/heaps.hpp"

using namespace adaknn;

namespace {

ArmState arm(double estimate, double alpha) {
  ArmState a;
  a.estimate = estimate;
  a.alpha = alpha;
  a.count = 1;
  a.exact = alpha == 0.0;
  return a;
}

std::vector<ArmState> arms_from(const std::vector<double>& estimates, double alpha = 0.1) {
  std::vector<ArmState> out;
  for (double e : estimates) out.push_back(arm(e, alpha));
  return out;
}

struct SortedPartition {
  std::vector<std::size_t> close, mid, far;
};

// Reference: full sort on (estimate, index).
SortedPartition sort_partition(std::span<const ArmState> arms, std::size_t k, std::size_t h) {
  std::vector<std::size_t> order(arms.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return arms[a].estimate < arms[b].estimate ||
           (arms[a].estimate == arms[b].estimate && a < b);
  });
  SortedPartition p;
  p.close.assign(order.begin(), order.begin() + k);
  p.mid.assign(order.begin() + k, order.begin() + k + h);
  p.far.assign(order.begin() + k + h, order.end());
  for (auto* v : {&p.close, &p.mid, &p.far}) std::sort(v->begin(), v->end());
  return p;
}

// Reference argmax/argmin by linear scan with the same tie rules.
std::size_t scan_d1(const HeapBank& b) {
  std::size_t best = SIZE_MAX;
  for (std::size_t i : b.members(Partition::Close)) {
    if (best == SIZE_MAX || b.arm(i).ucb() > b.arm(best).ucb()) best = i;
  }
  return best;
}

std::size_t scan_d2(const HeapBank& b) {
  std::size_t best = SIZE_MAX;
  for (std::size_t i : b.members(Partition::Far)) {
    if (best == SIZE_MAX || b.arm(i).lcb() < b.arm(best).lcb()) best = i;
  }
  return best;
}

std::size_t scan_b2(const HeapBank& b) {
  // Strict comparison in index order: ties stay with d2, then the lower index.
  std::size_t best = scan_d2(b);
  for (std::size_t i : b.members(Partition::Mid)) {
    if (b.arm(i).alpha > b.arm(best).alpha) best = i;
  }
  return best;
}

void check_against_sort(const HeapBank& b) {
  std::string why;
  REQUIRE_MESSAGE(b.validate(&why), why);
  const auto ref = sort_partition(b.arms(), b.k(), b.h());
  REQUIRE(b.members(Partition::Close) == ref.close);
  REQUIRE(b.members(Partition::Mid) == ref.mid);
  REQUIRE(b.members(Partition::Far) == ref.far);
  REQUIRE(b.peek_d1() == scan_d1(b));
  REQUIRE(b.peek_d2() == scan_d2(b));
  REQUIRE(b.peek_b2() == scan_b2(b));
}

}  // namespace

TEST_CASE("AddressableHeap keeps order under pushes, erases and updates") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  AddressableHeap<MinLex> heap(100);
  std::vector<double> key(100, 0.0);
  std::vector<bool> in(100, false);
  for (int t = 0; t < 20000; ++t) {
    const std::size_t i = rng() % 100;
    if (!in[i]) {
      key[i] = unit(rng);
      heap.push(i, key[i]);
      in[i] = true;
    } else if (rng() % 3 == 0) {
      heap.erase(i);
      in[i] = false;
    } else {
      key[i] = unit(rng);
      heap.update(i, key[i]);
    }
    REQUIRE(heap.valid());
    if (!heap.empty()) {
      std::size_t best = SIZE_MAX;
      for (std::size_t j = 0; j < 100; ++j) {
        if (in[j] && (best == SIZE_MAX || key[j] < key[best])) best = j;
      }
      REQUIRE(heap.top().index == best);
    }
  }
}

TEST_CASE("build") {
  SUBCASE("sorted input") {
    HeapBank b(arms_from({0.1, 0.2, 0.3, 0.4}), 1, 1);
    CHECK(b.members(Partition::Close) == std::vector<std::size_t>{0});
    CHECK(b.members(Partition::Mid) == std::vector<std::size_t>{1});
    CHECK(b.members(Partition::Far) == std::vector<std::size_t>{2, 3});
    CHECK(b.validate());
  }
  SUBCASE("all equal estimates fall back to index order") {
    HeapBank b(arms_from({0.5, 0.5, 0.5, 0.5}), 1, 1);
    CHECK(b.members(Partition::Close) == std::vector<std::size_t>{0});
    CHECK(b.members(Partition::Mid) == std::vector<std::size_t>{1});
    CHECK(b.members(Partition::Far) == std::vector<std::size_t>{2, 3});
  }
  SUBCASE("random n = 50 agrees with a full sort") {
    std::mt19937_64 rng(50);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int rep = 0; rep < 100; ++rep) {
      std::vector<ArmState> arms;
      for (int i = 0; i < 50; ++i) {
        // Coarse grid forces plenty of ties.
        arms.push_back(arm(std::round(unit(rng) * 20) / 20, unit(rng)));
      }
      const std::size_t k = 1 + rng() % 20;
      const std::size_t h = rng() % 20;
      HeapBank b(arms, k, h);
      check_against_sort(b);
    }
  }
  SUBCASE("k + h >= n is rejected") {
    CHECK_THROWS_AS(HeapBank(arms_from({0.1, 0.2, 0.3}), 2, 1), ConfigError);
    CHECK_THROWS_AS(HeapBank(arms_from({0.1, 0.2, 0.3}), 0, 1), ConfigError);
  }
}

TEST_CASE("peek_d1") {
  SUBCASE("wide interval beats higher estimate") {
    // A: 0.1 + 0.5 = 0.6 beats B: 0.2 + 0.05 = 0.25.
    std::vector<ArmState> arms{arm(0.1, 0.5), arm(0.2, 0.05), arm(0.8, 0.1), arm(0.9, 0.1)};
    HeapBank b(arms, 2, 0);
    CHECK(b.peek_d1() == 0);
    CHECK(b.peek_d1() == scan_d1(b));
  }
  SUBCASE("k = 1") {
    HeapBank b(arms_from({0.4, 0.1, 0.9}), 1, 0);
    CHECK(b.peek_d1() == 1);
  }
  SUBCASE("tie goes to the lower index") {
    std::vector<ArmState> arms{arm(0.9, 0.1), arm(0.2, 0.3), arm(0.3, 0.2), arm(0.95, 0.1)};
    HeapBank b(arms, 2, 0);
    CHECK(b.arm(1).ucb() == b.arm(2).ucb());
    CHECK(b.peek_d1() == 1);
  }
}

TEST_CASE("peek_d2") {
  SUBCASE("wide interval beats lower estimate") {
    // C: 0.9 - 0.8 = 0.1 beats D: 0.5 - 0.1 = 0.4.
    std::vector<ArmState> arms{arm(0.0, 0.1), arm(0.9, 0.8), arm(0.5, 0.1)};
    HeapBank b(arms, 1, 0);
    CHECK(b.peek_d2() == 1);
  }
  SUBCASE("single far element") {
    HeapBank b(arms_from({0.1, 0.2, 0.3}), 1, 1);
    CHECK(b.peek_d2() == 2);
  }
  SUBCASE("exact far arms use the distance itself") {
    std::vector<ArmState> arms{arm(0.0, 0.1), arm(0.7, 0.0), arm(0.4, 0.0), arm(0.6, 0.0)};
    HeapBank b(arms, 1, 0);
    CHECK(b.peek_d2() == 2);
  }
}

TEST_CASE("peek_b2") {
  SUBCASE("h = 0 gives d2") {
    std::vector<ArmState> arms{arm(0.0, 0.1), arm(0.9, 0.8), arm(0.5, 0.9)};
    HeapBank b(arms, 1, 0);
    CHECK(b.peek_b2() == b.peek_d2());
  }
  SUBCASE("wider mid arm wins") {
    std::vector<ArmState> arms{arm(0.1, 0.1), arm(0.2, 0.9), arm(0.5, 0.3)};
    HeapBank b(arms, 1, 1);
    CHECK(b.peek_d2() == 2);
    CHECK(b.peek_b2() == 1);
  }
  SUBCASE("equal radii go to d2") {
    std::vector<ArmState> arms{arm(0.1, 0.1), arm(0.2, 0.2), arm(0.5, 0.2)};
    HeapBank b(arms, 1, 1);
    CHECK(b.peek_b2() == 2);
  }
}

TEST_CASE("update_arm") {
  SUBCASE("lowering the far root keeps it at the root") {
    HeapBank b(arms_from({0.1, 0.2, 0.3, 0.4}), 1, 1);
    const std::size_t root = 2;
    CHECK(b.peek_d2() == root);
    b.update_arm(root, arm(0.25, 0.1));
    CHECK(b.peek_d2() == root);
    CHECK(b.arm(root).estimate == 0.25);
    CHECK(b.validate());
  }
  SUBCASE("exact arm collapses both bounds") {
    HeapBank b(arms_from({0.1, 0.2, 0.3, 0.4}), 1, 1);
    ArmState s = b.arm(3);
    s.alpha = 0.0;
    s.exact = true;
    b.update_arm(3, s);
    CHECK(b.arm(3).lcb() == b.arm(3).estimate);
    CHECK(b.arm(3).ucb() == b.arm(3).estimate);
    CHECK(b.validate());
  }
  SUBCASE("unknown index") {
    HeapBank b(arms_from({0.1, 0.2, 0.3}), 1, 0);
    CHECK_THROWS_AS(b.update_arm(3, arm(0.1, 0.1)), std::out_of_range);
  }
  SUBCASE("random updates keep all seven heaps valid") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<ArmState> arms;
    for (int i = 0; i < 50; ++i) arms.push_back(arm(unit(rng), unit(rng)));
    HeapBank b(arms, 5, 5);
    for (int t = 0; t < 1000; ++t) {
      b.update_arm(rng() % 50, arm(unit(rng), unit(rng) * 0.5));
      b.restore_ordering();
      std::string why;
      REQUIRE_MESSAGE(b.validate(&why), why);
    }
  }
}

TEST_CASE("restore_ordering") {
  SUBCASE("nothing to do") {
    HeapBank b(arms_from({0.1, 0.2, 0.3, 0.4}), 1, 1);
    CHECK(b.restore_ordering() == 0);
  }
  SUBCASE("close max pushed past the far set") {
    HeapBank b(arms_from({0.1, 0.2, 0.3, 0.4, 0.5, 0.6}), 2, 1);
    b.update_arm(1, arm(0.55, 0.1));
    CHECK(b.restore_ordering() >= 1);
    check_against_sort(b);
  }
  SUBCASE("h = 0 swaps close and far directly") {
    HeapBank b(arms_from({0.1, 0.2, 0.3, 0.4}), 2, 0);
    b.update_arm(0, arm(0.9, 0.1));
    CHECK(b.restore_ordering() == 1);
    check_against_sort(b);
  }
  SUBCASE("swap count stays bounded for single-arm updates") {
    std::mt19937_64 rng(100);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<ArmState> arms;
    for (int i = 0; i < 100; ++i) arms.push_back(arm(unit(rng), 0.1));
    HeapBank b(arms, 10, 10);
    std::size_t worst = 0;
    for (int t = 0; t < 10000; ++t) {
      b.update_arm(rng() % 100, arm(unit(rng), 0.1));
      worst = std::max(worst, b.restore_ordering());
    }
    MESSAGE("largest swap count over 10^4 single-arm cycles: " << worst);
    CHECK(worst <= 4);
  }
}

TEST_CASE("equivalence with a full sort after every two-arm cycle") {
  std::mt19937_64 rng(64);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t n : {3UL, 8UL, 17UL, 64UL}) {
    for (int rep = 0; rep < 5; ++rep) {
      const std::size_t k = 1 + rng() % (n - 1);
      const std::size_t h = rng() % (n - k);
      std::vector<ArmState> arms;
      for (std::size_t i = 0; i < n; ++i) arms.push_back(arm(unit(rng), unit(rng)));
      HeapBank b(arms, k, h);
      check_against_sort(b);
      for (int t = 0; t < 500; ++t) {
        b.update_arm(rng() % n, arm(unit(rng), unit(rng)));
        b.update_arm(rng() % n, arm(unit(rng), unit(rng)));
        b.restore_ordering();
        check_against_sort(b);
      }
    }
  }
}

TEST_CASE("element moves per update and restore stay within c * ceil(log2(n + 1))") {
  // c = 16 covers three re-keys plus a handful of swaps, each swap being an
  // erase and a push in two or three heaps on each side.
  constexpr double kMovesPerLevel = 16.0;
  for (std::size_t n : {100UL, 1000UL, 10000UL}) {
    std::mt19937_64 rng(n);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<ArmState> arms;
    for (std::size_t i = 0; i < n; ++i) arms.push_back(arm(unit(rng), 0.5 * unit(rng)));
    HeapBank b(arms, 10, 10);
    std::uint64_t worst = 0;
    for (int t = 0; t < 20000; ++t) {
      const std::uint64_t before = b.moves();
      b.update_arm(rng() % n, arm(unit(rng), 0.5 * unit(rng)));
      b.restore_ordering();
      worst = std::max(worst, b.moves() - before);
    }
    const double levels = std::ceil(std::log2(static_cast<double>(n) + 1.0));
    MESSAGE("n=" << n << " worst moves " << worst << " = " << worst / levels << " per level");
    CHECK(static_cast<double>(worst) <= kMovesPerLevel * levels);
  }
}
