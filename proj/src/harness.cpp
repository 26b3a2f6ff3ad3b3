#include "adaknn/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "adaknn/oracle.hpp"

namespace adaknn {

void ExperimentSpec::validate() const {
  if (c_alpha_grid.empty()) throw ConfigError("C_alpha grid must not be empty");
  for (double c : c_alpha_grid) {
    if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("C_alpha values must be positive");
  }
  if (trials == 0) throw ConfigError("trials must be at least 1");
  if (k == 0) throw ConfigError("k must be at least 1");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta must lie in (0,1)");
  if (source.kind == SourceKind::Csv && source.csv_path.empty()) {
    throw ConfigError("csv source needs a path");
  }
}

std::uint64_t trial_seed(std::uint64_t master, std::size_t c_alpha_index, std::size_t trial) {
  return derive_seed(derive_seed(master, c_alpha_index), trial);
}

Instance make_instance(const InstanceSource& source, std::uint64_t seed) {
  switch (source.kind) {
    case SourceKind::Subspace:
      return generate_subspace(SubspaceSpec{source.n, source.m, source.p, seed});
    case SourceKind::Coherent:
      return generate_coherent(source.n, source.m, seed);
    case SourceKind::Csv:
      return load_instance_csv(source.csv_path, source.normalize);
  }
  throw ConfigError("unknown instance source");
}

RunConfig trial_config(const ExperimentSpec& spec, double c_alpha, std::uint64_t seed) {
  RunConfig cfg;
  cfg.k = spec.k;
  cfg.h = spec.h;
  cfg.delta = spec.delta;
  cfg.variant = spec.variant;
  cfg.c_alpha = c_alpha;
  cfg.sampling_mode = spec.sampling_mode;
  cfg.seed = seed;
  return cfg;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("percentile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

Quartiles quartiles(const std::vector<double>& values) {
  return {percentile(values, 0.25), percentile(values, 0.5), percentile(values, 0.75)};
}

namespace {

TrialRecord run_trial(const ExperimentSpec& spec, const Instance* shared, std::size_t ci,
                      std::size_t trial) {
  const double c_alpha = spec.c_alpha_grid[ci];
  const std::uint64_t seed = trial_seed(spec.master_seed, ci, trial);
  try {
    std::optional<Instance> own;
    if (!shared) own = make_instance(spec.source, seed);
    const Instance& inst = shared ? *shared : *own;
    const RunReport report = run(inst.data, inst.query, trial_config(spec, c_alpha, seed));
    const OracleResult truth = brute_force(inst.data, inst.query, spec.k);
    TrialRecord rec;
    rec.c_alpha = c_alpha;
    rec.c_alpha_index = ci;
    rec.trial = trial;
    rec.seed = seed;
    rec.recall = recall(report.result_set, truth.k_set);
    rec.sample_fraction = sample_fraction(report);
    rec.iterations = report.iterations;
    rec.total_coordinate_evals = report.total_coordinate_evals;
    if (spec.record_timing) {
      rec.wall_time_ms = std::chrono::duration<double, std::milli>(report.wall_time).count();
    }
    return rec;
  } catch (const std::exception& e) {
    throw SweepError(e.what(), c_alpha, trial, seed);
  }
}

}  // namespace

SweepResult run_sweep(const ExperimentSpec& spec) {
  spec.validate();
  std::optional<Instance> shared;
  if (spec.source.kind == SourceKind::Csv) shared = make_instance(spec.source, 0);

  const std::size_t grid = spec.c_alpha_grid.size();
  const std::size_t total = grid * spec.trials;
  SweepResult result;
  result.records.resize(total);

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::size_t error_slot = total;
  std::mutex error_mutex;
  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t slot = next.fetch_add(1);
      if (slot >= total) return;
      try {
        result.records[slot] =
            run_trial(spec, shared ? &*shared : nullptr, slot / spec.trials, slot % spec.trials);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        // Report the lowest failing slot so the message is reproducible.
        if (slot < error_slot) {
          error_slot = slot;
          error = std::current_exception();
        }
        failed.store(true);
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(spec.threads, 1, total);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  for (std::size_t ci = 0; ci < grid; ++ci) {
    std::vector<double> rec, frac, iters;
    for (std::size_t t = 0; t < spec.trials; ++t) {
      const TrialRecord& r = result.records[ci * spec.trials + t];
      rec.push_back(r.recall);
      frac.push_back(r.sample_fraction);
      iters.push_back(static_cast<double>(r.iterations));
    }
    result.summaries.push_back(
        {spec.c_alpha_grid[ci], quartiles(rec), quartiles(frac), quartiles(iters)});
  }
  return result;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sweep_to_csv(const SweepResult& result) {
  std::string out =
      "c_alpha,trial,seed,recall,sample_fraction,iterations,total_coordinate_evals,"
      "wall_time_ms\n";
  for (const TrialRecord& r : result.records) {
    out += format_double(r.c_alpha) + ',' + std::to_string(r.trial) + ',' +
           std::to_string(r.seed) + ',' + format_double(r.recall) + ',' +
           format_double(r.sample_fraction) + ',' + std::to_string(r.iterations) + ',' +
           std::to_string(r.total_coordinate_evals) + ',' + format_double(r.wall_time_ms) +
           '\n';
  }
  return out;
}

namespace {

nlohmann::json quartiles_json(const Quartiles& q) {
  return {{"q25", q.q25}, {"median", q.median}, {"q75", q.q75}};
}

Quartiles quartiles_from(const nlohmann::json& j) {
  return {j.at("q25").get<double>(), j.at("median").get<double>(), j.at("q75").get<double>()};
}

}  // namespace

nlohmann::json sweep_to_json(const SweepResult& result) {
  nlohmann::json records = nlohmann::json::array();
  for (const TrialRecord& r : result.records) {
    records.push_back({{"c_alpha", r.c_alpha},
                       {"c_alpha_index", r.c_alpha_index},
                       {"trial", r.trial},
                       {"seed", r.seed},
                       {"recall", r.recall},
                       {"sample_fraction", r.sample_fraction},
                       {"iterations", r.iterations},
                       {"total_coordinate_evals", r.total_coordinate_evals},
                       {"wall_time_ms", r.wall_time_ms}});
  }
  nlohmann::json summaries = nlohmann::json::array();
  for (const GridSummary& s : result.summaries) {
    summaries.push_back({{"c_alpha", s.c_alpha},
                         {"recall", quartiles_json(s.recall)},
                         {"sample_fraction", quartiles_json(s.sample_fraction)},
                         {"iterations", quartiles_json(s.iterations)}});
  }
  return {{"records", records}, {"summaries", summaries}};
}

SweepResult sweep_from_json(const nlohmann::json& j) {
  SweepResult out;
  for (const auto& r : j.at("records")) {
    TrialRecord rec;
    rec.c_alpha = r.at("c_alpha").get<double>();
    rec.c_alpha_index = r.at("c_alpha_index").get<std::size_t>();
    rec.trial = r.at("trial").get<std::size_t>();
    rec.seed = r.at("seed").get<std::uint64_t>();
    rec.recall = r.at("recall").get<double>();
    rec.sample_fraction = r.at("sample_fraction").get<double>();
    rec.iterations = r.at("iterations").get<std::uint64_t>();
    rec.total_coordinate_evals = r.at("total_coordinate_evals").get<std::uint64_t>();
    rec.wall_time_ms = r.at("wall_time_ms").get<double>();
    out.records.push_back(rec);
  }
  for (const auto& s : j.at("summaries")) {
    out.summaries.push_back({s.at("c_alpha").get<double>(), quartiles_from(s.at("recall")),
                             quartiles_from(s.at("sample_fraction")),
                             quartiles_from(s.at("iterations"))});
  }
  return out;
}

void emit(const SweepResult& result, OutputFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (format == OutputFormat::Csv) {
    out << sweep_to_csv(result);
  } else {
    out << sweep_to_json(result).dump(2) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

nlohmann::json report_to_json(const RunReport& r, bool include_timing) {
  nlohmann::json j{{"result_set", r.result_set},
                   {"total_coordinate_evals", r.total_coordinate_evals},
                   {"exact_recompute_evals", r.exact_recompute_evals},
                   {"iterations", r.iterations},
                   {"exact_arm_count", r.exact_arm_count},
                   {"sample_fraction", sample_fraction(r)},
                   {"degenerate", r.degenerate},
                   {"n", r.n},
                   {"m", r.m},
                   {"per_arm_counts", r.per_arm_counts}};
  j["wall_time_ms"] =
      include_timing ? std::chrono::duration<double, std::milli>(r.wall_time).count() : 0.0;
  return j;
}

nlohmann::json complexity_to_json(const ComplexityReport& r) {
  nlohmann::json j{{"upper_score", r.upper_score},
                   {"per_arm_fixed_points", r.per_arm_fixed_points},
                   {"fact2_bound_ok", r.fact2_bound_ok}};
  if (r.lower_bound) {
    j["lower_bound"] = r.lower_bound->vacuous ? nlohmann::json(nullptr)
                                              : nlohmann::json(r.lower_bound->value);
    j["lower_bound_vacuous"] = r.lower_bound->vacuous;
  } else {
    j["lower_bound"] = nullptr;
    j["lower_bound_vacuous"] = false;
  }
  return j;
}

namespace {

const char* kind_name(SourceKind k) {
  switch (k) {
    case SourceKind::Subspace:
      return "subspace";
    case SourceKind::Coherent:
      return "coherent";
    case SourceKind::Csv:
      return "csv";
  }
  return "subspace";
}

}  // namespace

ExperimentSpec spec_from_json(const nlohmann::json& j) {
  ExperimentSpec s;
  if (j.contains("source")) {
    const auto& src = j.at("source");
    const std::string kind = src.value("kind", std::string("subspace"));
    if (kind == "subspace") {
      s.source.kind = SourceKind::Subspace;
    } else if (kind == "coherent") {
      s.source.kind = SourceKind::Coherent;
    } else if (kind == "csv") {
      s.source.kind = SourceKind::Csv;
    } else {
      throw ConfigError("unknown source kind '" + kind + "'");
    }
    s.source.n = src.value("n", s.source.n);
    s.source.m = src.value("m", s.source.m);
    s.source.p = src.value("p", s.source.p);
    s.source.csv_path = src.value("path", s.source.csv_path);
    s.source.normalize = src.value("normalize", s.source.normalize);
  }
  if (j.contains("c_alpha_grid")) s.c_alpha_grid = j.at("c_alpha_grid").get<std::vector<double>>();
  s.trials = j.value("trials", s.trials);
  s.k = j.value("k", s.k);
  s.h = j.value("h", s.h);
  s.delta = j.value("delta", s.delta);
  const std::string variant = j.value("variant", std::string("experimental"));
  if (variant == "theory") {
    s.variant = ConfidenceVariant::Theory;
  } else if (variant == "experimental") {
    s.variant = ConfidenceVariant::Experimental;
  } else {
    throw ConfigError("unknown variant '" + variant + "'");
  }
  const std::string mode = j.value("mode", std::string("with-replacement"));
  if (mode == "with-replacement") {
    s.sampling_mode = SamplingMode::WithReplacement;
  } else if (mode == "without-replacement") {
    s.sampling_mode = SamplingMode::WithoutReplacement;
  } else {
    throw ConfigError("unknown mode '" + mode + "'");
  }
  s.master_seed = j.value("seed", s.master_seed);
  s.threads = j.value("threads", s.threads);
  s.record_timing = j.value("timing", s.record_timing);
  return s;
}

nlohmann::json spec_to_json(const ExperimentSpec& s) {
  nlohmann::json src{{"kind", kind_name(s.source.kind)},
                     {"n", s.source.n},
                     {"m", s.source.m},
                     {"p", s.source.p}};
  if (s.source.kind == SourceKind::Csv) {
    src["path"] = s.source.csv_path;
    src["normalize"] = s.source.normalize;
  }
  return {{"source", src},
          {"c_alpha_grid", s.c_alpha_grid},
          {"trials", s.trials},
          {"k", s.k},
          {"h", s.h},
          {"delta", s.delta},
          {"variant", s.variant == ConfidenceVariant::Theory ? "theory" : "experimental"},
          {"mode", s.sampling_mode == SamplingMode::WithReplacement ? "with-replacement"
                                                                    : "without-replacement"},
          {"seed", s.master_seed},
          {"threads", s.threads},
          {"timing", s.record_timing}};
}

}  // namespace adaknn
