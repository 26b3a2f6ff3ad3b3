#include "adaknn/sampling.hpp"

#include <numeric>
#include <utility>

namespace adaknn {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  SplitMix64 outer(master);
  const std::uint64_t base = outer();
  SplitMix64 inner(base ^ (index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
  return inner();
}

std::uint64_t uniform_below(SplitMix64& rng, std::uint64_t bound) {
  unsigned __int128 prod = static_cast<unsigned __int128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(prod);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      prod = static_cast<unsigned __int128>(rng()) * bound;
      low = static_cast<std::uint64_t>(prod);
    }
  }
  return static_cast<std::uint64_t>(prod >> 64);
}

std::size_t CoordinateSampler::next() {
  if (mode_ == SamplingMode::WithReplacement) {
    ++consumed_;
    return static_cast<std::size_t>(uniform_below(rng_, m_));
  }
  if (consumed_ >= m_) {
    throw ExhaustionError("coordinate sampler exhausted: all indices consumed");
  }
  if (perm_.empty()) {
    perm_.resize(m_);
    std::iota(perm_.begin(), perm_.end(), 0U);
  }
  // One Fisher-Yates step over the unconsumed tail.
  const std::size_t pick =
      consumed_ + static_cast<std::size_t>(uniform_below(rng_, m_ - consumed_));
  std::swap(perm_[consumed_], perm_[pick]);
  const std::size_t j = perm_[consumed_];
  ++consumed_;
  if (consumed_ == m_) {
    perm_.clear();
    perm_.shrink_to_fit();
  }
  return j;
}

}  // namespace adaknn
