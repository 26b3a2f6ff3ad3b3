#include "adaknn/oracle.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace adaknn {

OracleResult brute_force(const Dataset& data, const Query& query, std::size_t k) {
  if (query.m() != data.m()) {
    throw DimensionError("query has " + std::to_string(query.m()) +
                         " coordinates, dataset has " + std::to_string(data.m()));
  }
  if (k == 0 || k > data.n()) {
    throw std::out_of_range("k must lie in [1, n]");
  }
  OracleResult out;
  out.distances.resize(data.n());
  for (std::size_t i = 0; i < data.n(); ++i) {
    out.distances[i] = exact_distance(query.coords(), data.point(i));
  }
  out.sorted_indices.resize(data.n());
  std::iota(out.sorted_indices.begin(), out.sorted_indices.end(), std::size_t{0});
  const auto& d = out.distances;
  std::sort(out.sorted_indices.begin(), out.sorted_indices.end(),
            [&d](std::size_t a, std::size_t b) {
              return d[a] < d[b] || (d[a] == d[b] && a < b);
            });
  out.k_set.assign(out.sorted_indices.begin(),
                   out.sorted_indices.begin() + static_cast<std::ptrdiff_t>(k));
  return out;
}

double recall(std::span<const std::size_t> returned, std::span<const std::size_t> truth) {
  if (truth.empty()) return 1.0;
  const std::unordered_set<std::size_t> got(returned.begin(), returned.end());
  std::size_t hit = 0;
  for (std::size_t i : truth) hit += got.count(i);
  return static_cast<double>(hit) / static_cast<double>(truth.size());
}

}  // namespace adaknn
