#pragma once

// Synthetic instances and CSV ingestion. Every generator returns a dataset
// and a query drawn from the same construction.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "adaknn/core.hpp"

namespace adaknn {

struct Instance {
  Dataset data;
  Query query;
};

struct SubspaceSpec {
  std::size_t n = 1000;
  std::size_t m = 12288;
  std::size_t p = 10;
  std::uint64_t seed = 0;

  /// Throws ConfigError unless 1 <= p <= m and n >= 2.
  void validate() const;
};

/// Points c * Q y with Q an m x p Gaussian matrix with unit-norm columns
/// and y uniform on the unit sphere of R^p. n + 1 points are drawn; the
/// last becomes the query. c is the single scalar that makes the largest
/// absolute coordinate over all n + 1 points exactly 1/2.
Instance generate_subspace(const SubspaceSpec& spec);

/// All points, query included, vanish except on coordinate 0. The query
/// sits at -1/2 and the points take the grid values -1/2 + (t+1)/n,
/// t = 0..n-1, in a seed-dependent order, so all distances are distinct
/// and at most 1/m.
Instance generate_coherent(std::size_t n, std::size_t m, std::uint64_t seed);

/// Sign-pattern instance with prescribed distances: the query is a random
/// +-1/2 vector and point i disagrees with it on round(d_i * m) random
/// coordinates, so its normalized squared distance is exactly that count
/// over m. Distances must lie in [0,1].
Instance generate_sign_profile(std::span<const double> distances, std::size_t m,
                               std::uint64_t seed);

struct LoadError : std::runtime_error {
  LoadError(const std::string& what, std::size_t row, std::size_t column)
      : std::runtime_error(what + " (row " + std::to_string(row) + ", column " +
                           std::to_string(column) + ")"),
        row(row),
        column(column) {}
  std::size_t row;     // 1-based line number in the file
  std::size_t column;  // 1-based cell number, 0 when the whole row is at fault
};

/// Affine map value -> (value - offset) / scale - 1/2.
struct NormalizationTransform {
  double offset = 0.0;
  double scale = 1.0;
};

struct LoadedMatrix {
  std::vector<double> values;  // row-major
  std::size_t rows = 0;
  std::size_t cols = 0;
  bool had_header = false;
  std::optional<NormalizationTransform> transform;
};

/// Reads a rectangular numeric CSV (comma separated, LF or CRLF). A first
/// row containing a non-numeric cell is treated as a header. With
/// normalize the global value range is mapped onto [-1/2, 1/2]; without
/// it every value must already lie there. Throws LoadError.
LoadedMatrix load_csv_matrix(const std::string& path, bool normalize);

/// All rows as a dataset.
Dataset load_csv(const std::string& path, bool normalize);

/// Dataset from every row but the last, which becomes the query.
Instance load_instance_csv(const std::string& path, bool normalize);

/// Writes the dataset rows followed by the query row, 17 significant digits.
void write_instance_csv(const std::string& path, const Instance& instance);
void write_dataset_csv(const std::string& path, const Dataset& data);

/// JSON sidecar describing the normalization transform.
void write_normalization_sidecar(const std::string& path, const LoadedMatrix& matrix);

}  // namespace adaknn
