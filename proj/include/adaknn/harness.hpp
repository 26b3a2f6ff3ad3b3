#pragma once

// Experiment sweeps: repeated trials over a grid of C_alpha values with
// recall and sample-fraction summaries.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "adaknn/algorithm.hpp"
#include "adaknn/bounds.hpp"
#include "adaknn/datagen.hpp"

namespace adaknn {

enum class SourceKind { Subspace, Coherent, Csv };

struct InstanceSource {
  SourceKind kind = SourceKind::Subspace;
  std::size_t n = 1000;
  std::size_t m = 12288;
  std::size_t p = 10;
  std::string csv_path;  // Csv: dataset rows then a query row
  bool normalize = false;
};

struct ExperimentSpec {
  InstanceSource source;
  std::vector<double> c_alpha_grid{1.0};
  std::size_t trials = 20;
  std::size_t k = 10;
  std::size_t h = 10;
  double delta = 0.001;
  ConfidenceVariant variant = ConfidenceVariant::Experimental;
  SamplingMode sampling_mode = SamplingMode::WithReplacement;
  std::uint64_t master_seed = 0;
  std::size_t threads = 1;
  bool record_timing = false;  // off keeps outputs byte-reproducible

  /// Throws ConfigError on an empty grid, zero trials or a bad C_alpha.
  void validate() const;
};

struct TrialRecord {
  double c_alpha = 0.0;
  std::size_t c_alpha_index = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  double recall = 0.0;
  double sample_fraction = 0.0;
  std::uint64_t iterations = 0;
  std::uint64_t total_coordinate_evals = 0;
  double wall_time_ms = 0.0;
};

struct Quartiles {
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
};

struct GridSummary {
  double c_alpha = 0.0;
  Quartiles recall;
  Quartiles sample_fraction;
  Quartiles iterations;
};

struct SweepResult {
  std::vector<TrialRecord> records;  // ordered by (c_alpha_index, trial)
  std::vector<GridSummary> summaries;
};

/// Seed shared by the instance and the run of one (grid point, trial).
std::uint64_t trial_seed(std::uint64_t master, std::size_t c_alpha_index, std::size_t trial);

/// Instance for one trial seed. Csv sources ignore the seed.
Instance make_instance(const InstanceSource& source, std::uint64_t seed);

/// Run configuration for one grid point and trial seed.
RunConfig trial_config(const ExperimentSpec& spec, double c_alpha, std::uint64_t seed);

/// Percentile with linear interpolation between order statistics
/// (q in [0,1]). Empty input throws std::invalid_argument.
double percentile(std::vector<double> values, double q);
Quartiles quartiles(const std::vector<double>& values);

struct SweepError : std::runtime_error {
  SweepError(const std::string& what, double c_alpha, std::size_t trial, std::uint64_t seed)
      : std::runtime_error(what + " (c_alpha=" + std::to_string(c_alpha) +
                           ", trial=" + std::to_string(trial) +
                           ", seed=" + std::to_string(seed) + ")"),
        c_alpha(c_alpha),
        trial(trial),
        seed(seed) {}
  double c_alpha;
  std::size_t trial;
  std::uint64_t seed;
};

/// Runs every (grid point, trial) pair, in parallel across trials when
/// spec.threads > 1. Results do not depend on the thread count.
SweepResult run_sweep(const ExperimentSpec& spec);

enum class OutputFormat { Csv, Json };

/// c_alpha,trial,seed,recall,sample_fraction,iterations,total_coordinate_evals,wall_time_ms
std::string sweep_to_csv(const SweepResult& result);
nlohmann::json sweep_to_json(const SweepResult& result);
SweepResult sweep_from_json(const nlohmann::json& j);
void emit(const SweepResult& result, OutputFormat format, const std::string& path);

nlohmann::json report_to_json(const RunReport& report, bool include_timing);
nlohmann::json complexity_to_json(const ComplexityReport& report);

ExperimentSpec spec_from_json(const nlohmann::json& j);
nlohmann::json spec_to_json(const ExperimentSpec& spec);

/// Shortest text that parses back to the same double (17 significant digits).
std::string format_double(double v);

}  // namespace adaknn
