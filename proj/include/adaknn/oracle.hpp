#pragma once

// Brute-force exact k-NN: the verification oracle and the naive cost
// yardstick (n*m coordinate evaluations).

#include <cstddef>
#include <span>
#include <vector>

#include "adaknn/core.hpp"

namespace adaknn {

struct OracleResult {
  std::vector<std::size_t> sorted_indices;  // by (distance, index)
  std::vector<std::size_t> k_set;           // first k of sorted_indices
  std::vector<double> distances;            // indexed by point
};

/// Throws DimensionError on a query/dataset width mismatch and
/// std::out_of_range unless 1 <= k <= n.
OracleResult brute_force(const Dataset& data, const Query& query, std::size_t k);

/// |returned ∩ truth| / |truth|.
double recall(std::span<const std::size_t> returned, std::span<const std::size_t> truth);

}  // namespace adaknn
