// adaknn: command-line front end.
//
//   adaknn gen    --n 1000 --m 12288 --p 10 --seed 7 --out inst.csv
//   adaknn run    --data inst.csv --k 10 --h 10 --delta 0.001
//   adaknn sweep  --config sweep.json --out results.csv
//   adaknn bounds --distances sorted.txt --k 10 --h 5 --m 4096 --delta 0.05
//
// Exit status: 0 success, 1 usage error, 2 runtime error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "adaknn/algorithm.hpp"
#include "adaknn/bounds.hpp"
#include "adaknn/datagen.hpp"
#include "adaknn/harness.hpp"
#include "adaknn/oracle.hpp"

namespace {

using namespace adaknn;

struct Common {
  std::size_t n = 1000;
  std::size_t m = 12288;
  std::size_t p = 10;
  std::size_t k = 10;
  std::size_t h = 10;
  double delta = 0.001;
  double c_alpha = 1.0;
  std::uint64_t seed = 0;
  SamplingMode mode = SamplingMode::WithReplacement;
  ConfidenceVariant variant = ConfidenceVariant::Experimental;
  std::string generator = "subspace";
  std::string data;
  bool normalize = false;
  std::string out;
  bool timing = false;
};

const std::map<std::string, SamplingMode> kModes{
    {"with-replacement", SamplingMode::WithReplacement},
    {"without-replacement", SamplingMode::WithoutReplacement}};
const std::map<std::string, ConfidenceVariant> kVariants{
    {"theory", ConfidenceVariant::Theory}, {"experimental", ConfidenceVariant::Experimental}};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path);
}

Instance load_or_generate(const Common& c) {
  if (!c.data.empty()) return load_instance_csv(c.data, c.normalize);
  InstanceSource src;
  src.kind = c.generator == "coherent" ? SourceKind::Coherent : SourceKind::Subspace;
  src.n = c.n;
  src.m = c.m;
  src.p = c.p;
  return make_instance(src, c.seed);
}

std::vector<double> read_distances(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  std::string text = ss.str();
  for (char& ch : text) {
    if (ch == ',') ch = ' ';
  }
  std::istringstream in(text);
  std::vector<double> out;
  double v;
  while (in >> v) out.push_back(v);
  if (!in.eof()) throw std::runtime_error("non-numeric entry in " + path);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive k-nearest-neighbor search with bandit confidence bounds"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  Common c;

  auto add_problem = [&c](CLI::App* sub) {
    sub->add_option("--k", c.k, "Number of neighbors")->check(CLI::PositiveNumber);
    sub->add_option("--h", c.h, "Size of the slack buffer");
    sub->add_option("--delta", c.delta, "Failure probability")->check(CLI::Range(0.0, 1.0));
  };
  auto add_instance = [&c](CLI::App* sub) {
    sub->add_option("--n", c.n, "Number of points");
    sub->add_option("--m", c.m, "Dimension");
    sub->add_option("--p", c.p, "Subspace dimension");
    sub->add_option("--seed", c.seed, "Master seed");
    sub->add_option("--generator", c.generator, "Instance generator")
        ->check(CLI::IsMember({"subspace", "coherent"}));
    sub->add_option("--data", c.data, "Instance CSV: one point per row, query last");
    sub->add_flag("--normalize", c.normalize, "Rescale the CSV value range onto [-1/2, 1/2]");
  };
  auto add_algo = [&c](CLI::App* sub) {
    sub->add_option("--c-alpha", c.c_alpha, "Experimental radius scale")
        ->check(CLI::PositiveNumber);
    sub->add_option("--mode", c.mode, "Coordinate sampling mode")
        ->transform(CLI::CheckedTransformer(kModes, CLI::ignore_case));
    sub->add_option("--variant", c.variant, "Confidence radius")
        ->transform(CLI::CheckedTransformer(kVariants, CLI::ignore_case));
    sub->add_flag("--timing", c.timing, "Record wall-clock times (output stops being reproducible)");
  };

  auto* run_cmd = app.add_subcommand("run", "Run one adaptive search and print its report");
  add_problem(run_cmd);
  add_instance(run_cmd);
  add_algo(run_cmd);
  run_cmd->add_option("--out", c.out, "Write the JSON report here instead of stdout");
  bool with_oracle = false;
  run_cmd->add_flag("--oracle", with_oracle, "Also report recall against brute force");

  auto* sweep_cmd = app.add_subcommand("sweep", "Trials over a grid of C_alpha values");
  std::string config;
  std::vector<double> grid;
  std::size_t trials = 20;
  std::size_t threads = 1;
  std::string format = "csv";
  sweep_cmd->add_option("--config", config, "JSON experiment description")
      ->check(CLI::ExistingFile);
  add_problem(sweep_cmd);
  add_instance(sweep_cmd);
  add_algo(sweep_cmd);
  sweep_cmd->add_option("--grid", grid, "C_alpha values (overrides --c-alpha)");
  sweep_cmd->add_option("--trials", trials, "Trials per grid point")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--out", c.out, "Output file (stdout when omitted)");
  sweep_cmd->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));

  auto* bounds_cmd = app.add_subcommand("bounds", "Complexity scores for a distance profile");
  std::string distances_path;
  bounds_cmd->add_option("--distances", distances_path,
                         "File of distances (whitespace or comma separated)");
  add_problem(bounds_cmd);
  add_instance(bounds_cmd);
  bounds_cmd->add_option("--out", c.out, "Output file (stdout when omitted)");

  auto* gen_cmd = app.add_subcommand("gen", "Write a generated instance to CSV");
  add_instance(gen_cmd);
  gen_cmd->add_option("--out", c.out, "Output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*run_cmd) {
      const Instance inst = load_or_generate(c);
      RunConfig cfg;
      cfg.k = c.k;
      cfg.h = c.h;
      cfg.delta = c.delta;
      cfg.variant = c.variant;
      cfg.c_alpha = c.c_alpha;
      cfg.sampling_mode = c.mode;
      cfg.seed = c.seed;
      const RunReport report = run(inst.data, inst.query, cfg);
      auto j = report_to_json(report, c.timing);
      if (with_oracle) {
        const OracleResult truth = brute_force(inst.data, inst.query, std::min(c.k, inst.data.n()));
        j["recall"] = recall(report.result_set, truth.k_set);
      }
      write_text(c.out, j.dump(2) + "\n");
    } else if (*sweep_cmd) {
      ExperimentSpec spec;
      if (!config.empty()) {
        std::ifstream f(config);
        spec = spec_from_json(nlohmann::json::parse(f));
      }
      auto given = [](CLI::App* sub, const char* name) { return sub->count(name) > 0; };
      if (given(sweep_cmd, "--data")) {
        spec.source.kind = SourceKind::Csv;
        spec.source.csv_path = c.data;
        spec.source.normalize = c.normalize;
      } else if (given(sweep_cmd, "--generator")) {
        spec.source.kind = c.generator == "coherent" ? SourceKind::Coherent : SourceKind::Subspace;
      }
      if (given(sweep_cmd, "--n")) spec.source.n = c.n;
      if (given(sweep_cmd, "--m")) spec.source.m = c.m;
      if (given(sweep_cmd, "--p")) spec.source.p = c.p;
      if (given(sweep_cmd, "--k")) spec.k = c.k;
      if (given(sweep_cmd, "--h")) spec.h = c.h;
      if (given(sweep_cmd, "--delta")) spec.delta = c.delta;
      if (given(sweep_cmd, "--variant")) spec.variant = c.variant;
      if (given(sweep_cmd, "--mode")) spec.sampling_mode = c.mode;
      if (given(sweep_cmd, "--seed")) spec.master_seed = c.seed;
      if (given(sweep_cmd, "--trials")) spec.trials = trials;
      if (given(sweep_cmd, "--threads")) spec.threads = threads;
      if (given(sweep_cmd, "--timing")) spec.record_timing = c.timing;
      if (!grid.empty()) {
        spec.c_alpha_grid = grid;
      } else if (given(sweep_cmd, "--c-alpha")) {
        spec.c_alpha_grid = {c.c_alpha};
      }
      const SweepResult result = run_sweep(spec);
      if (format == "csv") {
        write_text(c.out, sweep_to_csv(result));
      } else {
        write_text(c.out, sweep_to_json(result).dump(2) + "\n");
      }
    } else if (*bounds_cmd) {
      GapProfile profile;
      if (!distances_path.empty()) {
        if (bounds_cmd->count("--m") == 0) {
          std::cerr << "bounds: --m is required with --distances\n";
          return 1;
        }
        profile = make_profile(read_distances(distances_path), c.k, c.h, c.m);
      } else {
        const Instance inst = load_or_generate(c);
        const OracleResult truth = brute_force(inst.data, inst.query, 1);
        profile = make_profile(truth.distances, c.k, c.h, inst.data.m());
      }
      write_text(c.out, complexity_to_json(complexity_report(profile, c.delta)).dump(2) + "\n");
    } else if (*gen_cmd) {
      write_instance_csv(c.out, load_or_generate(c));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
