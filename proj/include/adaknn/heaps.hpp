#pragma once

// Seven coupled addressable heaps over the close / mid / far partitions.
//
//   close: max-heap on estimate, max-heap on estimate + alpha
//   mid:   min-heap on estimate, max-heap on estimate, max-heap on alpha
//   far:   min-heap on estimate, min-heap on estimate - alpha
//
// Every comparison is on (key, point index) so roots and partitions are
// deterministic. Estimate heaps order ties by index in the same direction
// as the global (estimate, index) sort; the confidence heaps prefer the
// lower index on a key tie.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "adaknn/core.hpp"

namespace adaknn {

struct HeapEntry {
  double key;
  std::uint32_t index;
};

/// (key, index) ascending.
struct MinLex {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    return a.key < b.key || (a.key == b.key && a.index < b.index);
  }
};

/// (key, index) descending.
struct MaxLex {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    return a.key > b.key || (a.key == b.key && a.index > b.index);
  }
};

/// Key descending, lower index first on a tie.
struct MaxKeyLowIndex {
  bool operator()(const HeapEntry& a, const HeapEntry& b) const {
    return a.key > b.key || (a.key == b.key && a.index < b.index);
  }
};

/// Array-backed binary heap with a position table, so the key of any
/// member can be changed in O(log n). `Before(a, b)` means a sits above b.
template <class Before>
class AddressableHeap {
 public:
  static constexpr std::uint32_t kAbsent = 0xffffffffU;

  AddressableHeap() = default;
  explicit AddressableHeap(std::size_t universe) : pos_(universe, kAbsent) {}

  std::size_t size() const { return heap_.size(); }
  bool empty() const { return heap_.empty(); }
  bool contains(std::size_t index) const { return pos_[index] != kAbsent; }
  const HeapEntry& top() const { return heap_.front(); }
  std::span<const HeapEntry> entries() const { return heap_; }
  std::uint32_t position(std::size_t index) const { return pos_[index]; }
  /// Element placements performed so far.
  std::uint64_t moves() const { return moves_; }

  /// Replaces the contents and heapifies bottom-up in O(size).
  void assign(std::vector<HeapEntry> entries) {
    for (const auto& e : heap_) pos_[e.index] = kAbsent;
    heap_ = std::move(entries);
    for (std::size_t i = 0; i < heap_.size(); ++i) {
      pos_[heap_[i].index] = static_cast<std::uint32_t>(i);
    }
    for (std::size_t i = heap_.size() / 2; i-- > 0;) sift_down(i);
  }

  void push(std::size_t index, double key) {
    heap_.push_back({key, static_cast<std::uint32_t>(index)});
    pos_[index] = static_cast<std::uint32_t>(heap_.size() - 1);
    sift_up(heap_.size() - 1);
  }

  void erase(std::size_t index) {
    const std::size_t at = pos_[index];
    pos_[index] = kAbsent;
    const HeapEntry last = heap_.back();
    heap_.pop_back();
    if (at == heap_.size()) return;
    place(at, last);
    fix(at);
  }

  void update(std::size_t index, double key) {
    const std::size_t at = pos_[index];
    heap_[at].key = key;
    fix(at);
  }

  /// Heap order on every parent/child pair and position-table agreement.
  bool valid() const {
    Before before;
    for (std::size_t i = 0; i < heap_.size(); ++i) {
      if (pos_[heap_[i].index] != i) return false;
      if (i > 0 && before(heap_[i], heap_[(i - 1) / 2])) return false;
    }
    std::size_t present = 0;
    for (auto p : pos_) present += (p != kAbsent);
    return present == heap_.size();
  }

 private:
  void place(std::size_t at, const HeapEntry& e) {
    heap_[at] = e;
    pos_[e.index] = static_cast<std::uint32_t>(at);
    ++moves_;
  }

  void fix(std::size_t at) {
    if (at > 0 && Before{}(heap_[at], heap_[(at - 1) / 2])) {
      sift_up(at);
    } else {
      sift_down(at);
    }
  }

  void sift_up(std::size_t at) {
    Before before;
    const HeapEntry e = heap_[at];
    while (at > 0) {
      const std::size_t parent = (at - 1) / 2;
      if (!before(e, heap_[parent])) break;
      place(at, heap_[parent]);
      at = parent;
    }
    place(at, e);
  }

  void sift_down(std::size_t at) {
    Before before;
    const HeapEntry e = heap_[at];
    const std::size_t n = heap_.size();
    while (true) {
      std::size_t child = 2 * at + 1;
      if (child >= n) break;
      if (child + 1 < n && before(heap_[child + 1], heap_[child])) ++child;
      if (!before(heap_[child], e)) break;
      place(at, heap_[child]);
      at = child;
    }
    place(at, e);
  }

  std::vector<HeapEntry> heap_;
  std::vector<std::uint32_t> pos_;
  std::uint64_t moves_ = 0;
};

enum class Partition : std::uint8_t { Close, Mid, Far };

/// The seven heaps plus the arm states they are keyed on.
class HeapBank {
 public:
  /// Sorts arms by (estimate, index): the first k go to close, the next h
  /// to mid, the rest to far. Throws ConfigError unless 1 <= k and
  /// k + h < arms.size().
  HeapBank(std::vector<ArmState> arms, std::size_t k, std::size_t h);

  std::size_t n() const { return arms_.size(); }
  std::size_t k() const { return k_; }
  std::size_t h() const { return h_; }

  const ArmState& arm(std::size_t index) const { return arms_[index]; }
  std::span<const ArmState> arms() const { return arms_; }
  Partition partition_of(std::size_t index) const { return where_[index]; }
  /// Members of a partition in ascending index order.
  std::vector<std::size_t> members(Partition p) const;

  /// Close arm with the largest upper confidence bound.
  std::size_t peek_d1() const { return close_ucb_max_.top().index; }
  /// Far arm with the smallest lower confidence bound.
  std::size_t peek_d2() const { return far_lcb_min_.top().index; }
  /// Widest radius among d2 and the mid arms; d2 wins ties.
  std::size_t peek_b2() const;

  /// Re-keys every heap of the arm's partition. Throws std::out_of_range
  /// for an unknown index.
  void update_arm(std::size_t index, const ArmState& state);

  /// Swaps boundary extremes until close <= mid <= far holds in (estimate,
  /// index) order. Returns the number of swaps performed.
  std::size_t restore_ordering();

  /// Full structural check: heap order, handles, partition sizes and the
  /// boundary ordering. On failure `why` (if given) names the first problem.
  bool validate(std::string* why = nullptr) const;

  /// Element placements performed by all heaps since construction.
  std::uint64_t moves() const;

 private:
  void insert_into(Partition p, std::size_t index);
  void remove_from(Partition p, std::size_t index);
  void move_between(std::size_t index, Partition to);

  std::vector<ArmState> arms_;
  std::vector<Partition> where_;
  std::size_t k_ = 1;
  std::size_t h_ = 0;

  AddressableHeap<MaxLex> close_est_max_;
  AddressableHeap<MaxKeyLowIndex> close_ucb_max_;
  AddressableHeap<MinLex> mid_est_min_;
  AddressableHeap<MaxLex> mid_est_max_;
  AddressableHeap<MaxKeyLowIndex> mid_alpha_max_;
  AddressableHeap<MinLex> far_est_min_;
  AddressableHeap<MinLex> far_lcb_min_;
};

}  // namespace adaknn
