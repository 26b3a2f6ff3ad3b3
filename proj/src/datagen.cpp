#include "adaknn/datagen.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <numeric>
#include <random>

#include <json.hpp>

#include "adaknn/sampling.hpp"

namespace adaknn {

namespace {

Instance split_instance(std::vector<double> coords, std::size_t n, std::size_t m) {
  std::vector<double> q(coords.end() - static_cast<std::ptrdiff_t>(m), coords.end());
  coords.resize(n * m);
  return Instance{Dataset(std::move(coords), n, m), Query(std::move(q))};
}

}  // namespace

void SubspaceSpec::validate() const {
  if (n < 2) throw ConfigError("subspace generator needs n >= 2");
  if (m < 1 || p < 1 || p > m) throw ConfigError("subspace generator needs 1 <= p <= m");
}

Instance generate_subspace(const SubspaceSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n, m = spec.m, p = spec.p;
  SplitMix64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // Q stored column-major: column c at basis[c*m .. c*m+m).
  std::vector<double> basis(m * p);
  for (std::size_t c = 0; c < p; ++c) {
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (std::size_t r = 0; r < m; ++r) {
        const double v = gauss(rng);
        basis[c * m + r] = v;
        norm2 += v * v;
      }
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t r = 0; r < m; ++r) basis[c * m + r] *= inv;
  }

  const std::size_t total = n + 1;
  std::vector<double> coords(total * m, 0.0);
  std::vector<double> y(p);
  double max_abs = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (auto& v : y) {
        v = gauss(rng);
        norm2 += v * v;
      }
    } while (norm2 == 0.0);
    const double inv = 1.0 / std::sqrt(norm2);
    double* row = coords.data() + i * m;
    for (std::size_t c = 0; c < p; ++c) {
      const double w = y[c] * inv;
      const double* col = basis.data() + c * m;
      for (std::size_t r = 0; r < m; ++r) row[r] += w * col[r];
    }
    for (std::size_t r = 0; r < m; ++r) max_abs = std::max(max_abs, std::abs(row[r]));
  }

  const double scale = max_abs > 0.0 ? kHalf / max_abs : 0.0;
  for (double& v : coords) v = std::clamp(v * scale, -kHalf, kHalf);
  return split_instance(std::move(coords), n, m);
}

Instance generate_coherent(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n < 2) throw ConfigError("coherent generator needs n >= 2");
  if (m < 1) throw ConfigError("coherent generator needs m >= 1");
  std::vector<std::size_t> slot(n);
  std::iota(slot.begin(), slot.end(), std::size_t{0});
  SplitMix64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(slot[i - 1], slot[uniform_below(rng, i)]);
  }
  std::vector<double> coords((n + 1) * m, 0.0);
  const double step = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    coords[i * m] =
        slot[i] + 1 == n ? kHalf
                         : std::min(-kHalf + static_cast<double>(slot[i] + 1) * step, kHalf);
  }
  coords[n * m] = -kHalf;
  return split_instance(std::move(coords), n, m);
}

Instance generate_sign_profile(std::span<const double> distances, std::size_t m,
                               std::uint64_t seed) {
  const std::size_t n = distances.size();
  if (n < 2) throw ConfigError("sign-profile generator needs n >= 2");
  if (m < 1) throw ConfigError("sign-profile generator needs m >= 1");
  SplitMix64 rng(seed);
  std::vector<double> coords((n + 1) * m);
  double* query = coords.data() + n * m;
  for (std::size_t j = 0; j < m; ++j) query[j] = (rng() >> 63) ? kHalf : -kHalf;

  std::vector<std::uint32_t> perm(m);
  for (std::size_t i = 0; i < n; ++i) {
    const double d = distances[i];
    if (!(d >= 0.0 && d <= 1.0)) throw ConfigError("target distances must lie in [0,1]");
    const auto flips = static_cast<std::size_t>(std::llround(d * static_cast<double>(m)));
    std::copy(query, query + m, coords.begin() + static_cast<std::ptrdiff_t>(i * m));
    std::iota(perm.begin(), perm.end(), 0U);
    for (std::size_t t = 0; t < flips; ++t) {
      std::swap(perm[t], perm[t + uniform_below(rng, m - t)]);
      coords[i * m + perm[t]] = -query[perm[t]];
    }
  }
  return split_instance(std::move(coords), n, m);
}

LoadedMatrix load_csv_matrix(const std::string& path, bool normalize) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path, 0, 0);

  LoadedMatrix out;
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> row;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    row.clear();
    bool numeric = true;
    std::size_t bad_col = 0;
    std::size_t start = 0, col = 0;
    while (true) {
      ++col;
      const std::size_t comma = line.find(',', start);
      const std::size_t end = comma == std::string::npos ? line.size() : comma;
      std::size_t b = start, e = end;
      while (b < e && (line[b] == ' ' || line[b] == '\t')) ++b;
      while (e > b && (line[e - 1] == ' ' || line[e - 1] == '\t')) --e;
      if (b < e && line[b] == '+') ++b;
      double v = 0.0;
      const auto res = std::from_chars(line.data() + b, line.data() + e, v);
      if (b == e || res.ec != std::errc() || res.ptr != line.data() + e || !std::isfinite(v)) {
        if (numeric) bad_col = col;
        numeric = false;
      }
      row.push_back(v);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }

    if (!numeric) {
      if (out.rows == 0 && !out.had_header) {
        out.had_header = true;
        continue;
      }
      throw LoadError("non-numeric cell", line_no, bad_col);
    }
    if (out.rows == 0) {
      out.cols = row.size();
    } else if (row.size() != out.cols) {
      throw LoadError("ragged row: expected " + std::to_string(out.cols) + " cells, got " +
                          std::to_string(row.size()),
                      line_no, 0);
    }
    out.values.insert(out.values.end(), row.begin(), row.end());
    ++out.rows;
  }
  if (out.rows == 0) throw LoadError("no data rows in " + path, line_no, 0);

  if (normalize) {
    const auto [lo, hi] = std::minmax_element(out.values.begin(), out.values.end());
    NormalizationTransform t{*lo, *hi - *lo};
    if (t.scale == 0.0) {
      // Constant data maps to the origin.
      t.scale = 1.0;
      t.offset -= kHalf;
      std::fill(out.values.begin(), out.values.end(), 0.0);
    } else {
      for (double& v : out.values) {
        v = std::clamp((v - t.offset) / t.scale - kHalf, -kHalf, kHalf);
      }
    }
    out.transform = t;
  } else {
    for (std::size_t i = 0; i < out.values.size(); ++i) {
      if (!(std::abs(out.values[i]) <= kHalf)) {
        throw LoadError("value outside [-1/2, 1/2]; pass normalize to rescale",
                        i / out.cols + 1 + (out.had_header ? 1 : 0), i % out.cols + 1);
      }
    }
  }
  return out;
}

Dataset load_csv(const std::string& path, bool normalize) {
  LoadedMatrix mat = load_csv_matrix(path, normalize);
  return Dataset(std::move(mat.values), mat.rows, mat.cols);
}

Instance load_instance_csv(const std::string& path, bool normalize) {
  LoadedMatrix mat = load_csv_matrix(path, normalize);
  if (mat.rows < 3) {
    throw LoadError("instance file needs at least two points plus a query row", mat.rows, 0);
  }
  return split_instance(std::move(mat.values), mat.rows - 1, mat.cols);
}

namespace {

void write_rows(std::FILE* f, std::span<const double> values, std::size_t cols) {
  char buf[32];
  for (std::size_t i = 0; i < values.size(); ++i) {
    const int len = std::snprintf(buf, sizeof buf, "%.17g", values[i]);
    std::fwrite(buf, 1, static_cast<std::size_t>(len), f);
    std::fputc((i + 1) % cols == 0 ? '\n' : ',', f);
  }
}

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};

std::unique_ptr<std::FILE, FileCloser> open_for_write(const std::string& path) {
  std::unique_ptr<std::FILE, FileCloser> f(std::fopen(path.c_str(), "wb"));
  if (!f) throw std::runtime_error("cannot write " + path);
  return f;
}

}  // namespace

void write_dataset_csv(const std::string& path, const Dataset& data) {
  auto f = open_for_write(path);
  write_rows(f.get(), data.coords(), data.m());
}

void write_instance_csv(const std::string& path, const Instance& instance) {
  auto f = open_for_write(path);
  write_rows(f.get(), instance.data.coords(), instance.data.m());
  write_rows(f.get(), instance.query.coords(), instance.query.m());
}

void write_normalization_sidecar(const std::string& path, const LoadedMatrix& matrix) {
  nlohmann::json j;
  j["rows"] = matrix.rows;
  j["cols"] = matrix.cols;
  j["had_header"] = matrix.had_header;
  j["normalized"] = matrix.transform.has_value();
  if (matrix.transform) {
    j["offset"] = matrix.transform->offset;
    j["scale"] = matrix.transform->scale;
    j["map"] = "x -> (x - offset) / scale - 0.5";
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace adaknn
