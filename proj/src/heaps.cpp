#include "adaknn/heaps.hpp"

#include <algorithm>
#include <numeric>

namespace adaknn {

namespace {

bool lex_less(const ArmState& a, std::size_t ia, const ArmState& b, std::size_t ib) {
  return a.estimate < b.estimate || (a.estimate == b.estimate && ia < ib);
}

}  // namespace

HeapBank::HeapBank(std::vector<ArmState> arms, std::size_t k, std::size_t h)
    : arms_(std::move(arms)), k_(k), h_(h) {
  const std::size_t n = arms_.size();
  if (k == 0) throw ConfigError("k must be at least 1");
  if (k + h >= n) {
    throw ConfigError("k + h must be smaller than n (k=" + std::to_string(k) +
                      ", h=" + std::to_string(h) + ", n=" + std::to_string(n) + ")");
  }
  if (n > AddressableHeap<MinLex>::kAbsent) throw ConfigError("too many points");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto less = [this](std::size_t a, std::size_t b) {
    return lex_less(arms_[a], a, arms_[b], b);
  };
  std::nth_element(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                   order.end(), less);
  if (h > 0) {
    std::nth_element(order.begin() + static_cast<std::ptrdiff_t>(k),
                     order.begin() + static_cast<std::ptrdiff_t>(k + h),
                     order.end(), less);
  }

  close_est_max_ = AddressableHeap<MaxLex>(n);
  close_ucb_max_ = AddressableHeap<MaxKeyLowIndex>(n);
  mid_est_min_ = AddressableHeap<MinLex>(n);
  mid_est_max_ = AddressableHeap<MaxLex>(n);
  mid_alpha_max_ = AddressableHeap<MaxKeyLowIndex>(n);
  far_est_min_ = AddressableHeap<MinLex>(n);
  far_lcb_min_ = AddressableHeap<MinLex>(n);
  where_.assign(n, Partition::Far);

  std::vector<HeapEntry> est, conf, alpha;
  auto fill = [&](std::size_t lo, std::size_t hi, Partition p) {
    est.clear();
    conf.clear();
    alpha.clear();
    for (std::size_t r = lo; r < hi; ++r) {
      const std::size_t i = order[r];
      const auto idx = static_cast<std::uint32_t>(i);
      const ArmState& a = arms_[i];
      where_[i] = p;
      est.push_back({a.estimate, idx});
      if (p == Partition::Close) conf.push_back({a.ucb(), idx});
      if (p == Partition::Far) conf.push_back({a.lcb(), idx});
      if (p == Partition::Mid) alpha.push_back({a.alpha, idx});
    }
  };
  fill(0, k, Partition::Close);
  close_est_max_.assign(est);
  close_ucb_max_.assign(conf);
  fill(k, k + h, Partition::Mid);
  mid_est_min_.assign(est);
  mid_est_max_.assign(est);
  mid_alpha_max_.assign(alpha);
  fill(k + h, n, Partition::Far);
  far_est_min_.assign(est);
  far_lcb_min_.assign(conf);
}

std::vector<std::size_t> HeapBank::members(Partition p) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < where_.size(); ++i) {
    if (where_[i] == p) out.push_back(i);
  }
  return out;
}

std::size_t HeapBank::peek_b2() const {
  const std::size_t d2 = peek_d2();
  if (mid_alpha_max_.empty()) return d2;
  const HeapEntry& widest = mid_alpha_max_.top();
  return widest.key > arms_[d2].alpha ? widest.index : d2;
}

void HeapBank::insert_into(Partition p, std::size_t index) {
  const ArmState& a = arms_[index];
  switch (p) {
    case Partition::Close:
      close_est_max_.push(index, a.estimate);
      close_ucb_max_.push(index, a.ucb());
      break;
    case Partition::Mid:
      mid_est_min_.push(index, a.estimate);
      mid_est_max_.push(index, a.estimate);
      mid_alpha_max_.push(index, a.alpha);
      break;
    case Partition::Far:
      far_est_min_.push(index, a.estimate);
      far_lcb_min_.push(index, a.lcb());
      break;
  }
  where_[index] = p;
}

void HeapBank::remove_from(Partition p, std::size_t index) {
  switch (p) {
    case Partition::Close:
      close_est_max_.erase(index);
      close_ucb_max_.erase(index);
      break;
    case Partition::Mid:
      mid_est_min_.erase(index);
      mid_est_max_.erase(index);
      mid_alpha_max_.erase(index);
      break;
    case Partition::Far:
      far_est_min_.erase(index);
      far_lcb_min_.erase(index);
      break;
  }
}

void HeapBank::move_between(std::size_t index, Partition to) {
  remove_from(where_[index], index);
  insert_into(to, index);
}

void HeapBank::update_arm(std::size_t index, const ArmState& state) {
  if (index >= arms_.size()) {
    throw std::out_of_range("update_arm: unknown point index " + std::to_string(index));
  }
  arms_[index] = state;
  switch (where_[index]) {
    case Partition::Close:
      close_est_max_.update(index, state.estimate);
      close_ucb_max_.update(index, state.ucb());
      break;
    case Partition::Mid:
      mid_est_min_.update(index, state.estimate);
      mid_est_max_.update(index, state.estimate);
      mid_alpha_max_.update(index, state.alpha);
      break;
    case Partition::Far:
      far_est_min_.update(index, state.estimate);
      far_lcb_min_.update(index, state.lcb());
      break;
  }
}

std::size_t HeapBank::restore_ordering() {
  std::size_t swaps = 0;
  auto out_of_order = [this](std::size_t lower, std::size_t upper) {
    return lex_less(arms_[upper], upper, arms_[lower], lower);
  };
  while (true) {
    const std::size_t close_max = close_est_max_.top().index;
    const std::size_t far_min = far_est_min_.top().index;
    if (h_ == 0) {
      if (!out_of_order(close_max, far_min)) break;
      move_between(close_max, Partition::Far);
      move_between(far_min, Partition::Close);
    } else {
      const std::size_t mid_min = mid_est_min_.top().index;
      const std::size_t mid_max = mid_est_max_.top().index;
      if (out_of_order(close_max, mid_min)) {
        move_between(close_max, Partition::Mid);
        move_between(mid_min, Partition::Close);
      } else if (out_of_order(mid_max, far_min)) {
        move_between(mid_max, Partition::Far);
        move_between(far_min, Partition::Mid);
      } else {
        break;
      }
    }
    ++swaps;
  }
  return swaps;
}

std::uint64_t HeapBank::moves() const {
  return close_est_max_.moves() + close_ucb_max_.moves() + mid_est_min_.moves() +
         mid_est_max_.moves() + mid_alpha_max_.moves() + far_est_min_.moves() +
         far_lcb_min_.moves();
}

bool HeapBank::validate(std::string* why) const {
  auto fail = [why](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (!close_est_max_.valid()) return fail("close estimate heap invalid");
  if (!close_ucb_max_.valid()) return fail("close ucb heap invalid");
  if (!mid_est_min_.valid()) return fail("mid estimate min-heap invalid");
  if (!mid_est_max_.valid()) return fail("mid estimate max-heap invalid");
  if (!mid_alpha_max_.valid()) return fail("mid alpha heap invalid");
  if (!far_est_min_.valid()) return fail("far estimate heap invalid");
  if (!far_lcb_min_.valid()) return fail("far lcb heap invalid");

  const std::size_t n = arms_.size();
  if (close_est_max_.size() != k_ || close_ucb_max_.size() != k_) {
    return fail("close partition does not hold k arms");
  }
  if (mid_est_min_.size() != h_ || mid_est_max_.size() != h_ ||
      mid_alpha_max_.size() != h_) {
    return fail("mid partition does not hold h arms");
  }
  if (far_est_min_.size() != n - k_ - h_ || far_lcb_min_.size() != n - k_ - h_) {
    return fail("far partition does not hold n-k-h arms");
  }

  for (std::size_t i = 0; i < n; ++i) {
    const bool c = where_[i] == Partition::Close;
    const bool md = where_[i] == Partition::Mid;
    const bool f = where_[i] == Partition::Far;
    if (close_est_max_.contains(i) != c || close_ucb_max_.contains(i) != c ||
        mid_est_min_.contains(i) != md || mid_est_max_.contains(i) != md ||
        mid_alpha_max_.contains(i) != md || far_est_min_.contains(i) != f ||
        far_lcb_min_.contains(i) != f) {
      return fail("handle table disagrees with partition of arm " + std::to_string(i));
    }
  }

  auto check_keys = [&](auto& heap, auto key_of, const char* name) {
    for (const HeapEntry& e : heap.entries()) {
      if (e.key != key_of(arms_[e.index])) {
        if (why) *why = std::string(name) + " key stale for arm " + std::to_string(e.index);
        return false;
      }
    }
    return true;
  };
  auto est = [](const ArmState& a) { return a.estimate; };
  auto ucb = [](const ArmState& a) { return a.ucb(); };
  auto lcb = [](const ArmState& a) { return a.lcb(); };
  auto alp = [](const ArmState& a) { return a.alpha; };
  if (!check_keys(close_est_max_, est, "close estimate") ||
      !check_keys(close_ucb_max_, ucb, "close ucb") ||
      !check_keys(mid_est_min_, est, "mid estimate min") ||
      !check_keys(mid_est_max_, est, "mid estimate max") ||
      !check_keys(mid_alpha_max_, alp, "mid alpha") ||
      !check_keys(far_est_min_, est, "far estimate") ||
      !check_keys(far_lcb_min_, lcb, "far lcb")) {
    return false;
  }

  const std::size_t close_max = close_est_max_.top().index;
  const std::size_t far_min = far_est_min_.top().index;
  if (h_ == 0) {
    if (lex_less(arms_[far_min], far_min, arms_[close_max], close_max)) {
      return fail("close max exceeds far min");
    }
  } else {
    const std::size_t mid_min = mid_est_min_.top().index;
    const std::size_t mid_max = mid_est_max_.top().index;
    if (lex_less(arms_[mid_min], mid_min, arms_[close_max], close_max)) {
      return fail("close max exceeds mid min");
    }
    if (lex_less(arms_[far_min], far_min, arms_[mid_max], mid_max)) {
      return fail("mid max exceeds far min");
    }
  }
  return true;
}

}  // namespace adaknn
