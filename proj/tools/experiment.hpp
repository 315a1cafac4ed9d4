#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace rbm::cli {

/// One instance source of an experiment: a document on disk, a gap
/// construction, or a seeded generator draw.
struct ExperimentInstance {
  std::string name;
  std::string path;          // instance document on disk
  std::string initial_path;  // optional starting solution
  std::vector<std::string> candidate_paths;  // solutions offered to the OPT certificate
  std::optional<std::pair<std::int64_t, std::int64_t>> gap;  // (p, ell)
  std::optional<std::uint64_t> euclidean_seed;
  std::optional<std::uint64_t> grid_seed;
  /// Gap instances are searched at their own p only.
  std::optional<std::size_t> fixed_p;
};

struct GeneratorBlock {
  std::size_t count = 0;
  std::size_t n_clients = 10, n_red = 4, n_blue = 4, k_r = 2, k_b = 2;
  double box = 100.0;
  std::int64_t grid = 20;
  std::uint64_t seed = 1;
};

struct ExperimentSpec {
  std::vector<ExperimentInstance> instances;
  std::vector<std::size_t> p_values{1};
  std::vector<std::uint64_t> seeds{0};
  double epsilon = 0.0;
  bool first_improvement = false;
  std::uint64_t opt_cap = 1'000'000;
  std::uint64_t max_iters = 1'000'000;
  unsigned threads = 1;
  GeneratorBlock euclidean;
  GeneratorBlock grid;
};

/// Parses an experiment spec document:
///   {"instances": [path | {"name", "path", "initial", "candidates"}],
///    "corpus": dir, "gap": {"p": [...], "ell": [...] | "ell_max": L},
///    "euclidean": {...}, "grid": {...},
///    "p": [...], "seeds": [...], "epsilon": e, "rule": "best"|"first",
///    "opt_cap": N, "max_iters": N, "threads": T}
/// Corpus directories contribute every file named instance.json or
/// *.instance.json; a sibling local.json / <stem>.initial.json is used as
/// the starting solution and global.json / <stem>.global.json as an OPT
/// candidate. Throws InputError on invalid specs.
ExperimentSpec parse_experiment_spec(const std::string& text, const std::string& base_dir);

struct ExperimentRow {
  std::string instance;
  std::size_t p = 0;
  std::uint64_t seed = 0;
  std::string local_cost;
  std::string opt;
  std::optional<double> ratio;
  std::uint64_t iterations = 0;
  double wall_ms = 0.0;
  std::string status = "ok";
};

struct PSummary {
  std::size_t rows = 0;
  std::size_t rows_with_opt = 0;
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  bool flagged = false;  // p = 1 and a ratio above 7 + 1e-9
};

struct ExperimentOutcome {
  std::vector<ExperimentRow> rows;
  std::map<std::size_t, PSummary> summary;
};

inline constexpr const char* kCsvVersionLine = "# rbmedian experiment csv v1";

/// Runs every (instance, p, seed) row. Rows are evaluated in parallel when
/// spec.threads > 1 but always reported in spec order; a failing row is
/// recorded in its status column and the run continues.
ExperimentOutcome run_experiment(const ExperimentSpec& spec);

/// Per-p row count, max and mean ratio over rows that have one.
std::map<std::size_t, PSummary> summarize(const std::vector<ExperimentRow>& rows);

std::string to_csv(const ExperimentOutcome& outcome, bool include_timing = true);
std::string summary_text(const ExperimentOutcome& outcome);
std::string summary_json(const ExperimentOutcome& outcome);

}  // namespace rbm::cli
