#include "commands.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <variant>

#include <CLI11.hpp>

#include "experiment.hpp"
#include "rbmedian/decomposition.hpp"
#include "rbmedian/exact.hpp"
#include "rbmedian/gap.hpp"
#include "rbmedian/io.hpp"
#include "rbmedian/local_search.hpp"
#include "rbmedian/reports.hpp"

namespace rbm::cli {
namespace {

namespace fs = std::filesystem;

template <DistanceValue D>
std::string show(D v) {
  if constexpr (kExactDistance<D>) {
    return std::to_string(v);
  } else {
    return exact_decimal(v);
  }
}

void emit(const std::string& doc, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << doc;
  } else {
    write_file(path, doc);
  }
}

struct SolveArgs {
  std::string instance, initial, out, rule = "best";
  std::size_t p = 1;
  double epsilon = 0.0;
  std::uint64_t seed = 0, max_iters = 1'000'000;
  bool parallel = false;
  unsigned threads = 0;
};

int cmd_solve(const SolveArgs& a, std::ostream& out) {
  SearchConfig config;
  config.p = a.p;
  config.epsilon = a.epsilon;
  config.rule = a.rule == "first" ? SearchRule::kFirstImprovement : SearchRule::kBestImprovement;
  config.seed = a.seed;
  config.max_iters = a.max_iters;
  config.parallel = a.parallel;
  config.threads = a.threads;
  std::optional<Solution> initial;
  if (!a.initial.empty()) initial = parse_solution(read_file(a.initial));
  return std::visit(
      [&](const auto& inst) {
        const auto result = run(inst, config, initial);
        emit(to_json(result), a.out, out);
        if (!a.out.empty()) {
          out << "cost " << show(result.assignment.total) << " after " << result.iterations
              << " iterations (" << to_string(result.termination) << ")\n";
        }
        return int{kExitOk};
      },
      parse_instance(read_file(a.instance)));
}

int cmd_exact(const std::string& instance, const std::string& path, std::uint64_t cap,
              unsigned threads, std::ostream& out) {
  return std::visit(
      [&](const auto& inst) {
        const auto result = brute_force_opt(inst, cap, threads);
        emit(to_json(result), path, out);
        if (!path.empty()) out << "optimum " << show(result.cost) << "\n";
        return int{kExitOk};
      },
      parse_instance(read_file(instance)));
}

int cmd_verify(const std::string& instance, const std::string& solution, std::size_t p,
               std::uint64_t cap, unsigned threads, const std::string& path, std::ostream& out) {
  const Solution sol = parse_solution(read_file(solution));
  return std::visit(
      [&](const auto& inst) {
        const auto verdict = is_local_opt(inst, sol, p, cap, threads);
        if (!path.empty()) write_file(path, to_json(verdict));
        if (verdict.locally_optimal) {
          out << "locally optimal (" << verdict.scanned << " moves scanned)\n";
          return int{kExitOk};
        }
        out << "not locally optimal; witness move #" << verdict.witness_index << ": "
            << describe(*verdict.witness) << " delta " << show(verdict.witness_delta) << "\n";
        return int{kExitVerificationFailed};
      },
      parse_instance(read_file(instance)));
}

int cmd_decompose(const std::string& instance, const std::string& local,
                  const std::string& global, bool disjoint, const std::string& path,
                  std::ostream& out) {
  const Solution s = parse_solution(read_file(local));
  const Solution o = parse_solution(read_file(global));
  return std::visit(
      [&](const auto& inst) {
        const auto dec = decompose(inst, s, o, disjoint);
        emit(to_json(dec), path, out);
        if (!path.empty()) {
          out << dec.groups.size() << " groups, " << dec.blocks.size() << " blocks; checks "
              << (dec.ok() ? "passed" : "FAILED") << "\n";
        }
        return dec.ok() ? int{kExitOk} : int{kExitVerificationFailed};
      },
      parse_instance(read_file(instance)));
}

int cmd_gengap(std::int64_t p, std::int64_t ell, const std::string& dir, bool verify,
               std::uint64_t cap, unsigned threads, std::ostream& out) {
  const GapInstance gap = build_gap({p, ell});
  if (!dir.empty()) {
    fs::create_directories(dir);
    const fs::path base(dir);
    write_file((base / "instance.json").string(), serialize(gap.instance));
    write_file((base / "local.json").string(), serialize(gap.local));
    write_file((base / "global.json").string(), serialize(gap.global));
    write_file((base / "expected.json").string(), expectations_json(gap));
  }
  out << "gap p=" << p << " ell=" << ell << ": local " << gap.expected_local_cost << ", global "
      << gap.expected_global_cost << ", ratio " << to_string(gap.expected_ratio) << "\n";
  if (!verify) return kExitOk;

  const GapReport report = verify_gap(gap, cap, threads);
  if (!dir.empty()) write_file((fs::path(dir) / "verify.json").string(), to_json(report));
  for (const GapCheck& c : report.checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
  }
  if (report.witness) {
    out << "witness (" << report.witness_case << "): " << describe(*report.witness) << " delta "
        << report.witness_delta << "\n";
  }
  return report.ok() ? kExitOk : kExitVerificationFailed;
}

int cmd_experiment(const std::string& spec_path, const std::string& csv_path,
                   const std::string& summary_path, std::ostream& out) {
  const std::string base = fs::path(spec_path).parent_path().string();
  const ExperimentSpec spec = parse_experiment_spec(read_file(spec_path), base);
  const ExperimentOutcome outcome = run_experiment(spec);
  emit(to_csv(outcome), csv_path, out);
  if (!summary_path.empty()) write_file(summary_path, summary_json(outcome));
  if (!csv_path.empty()) out << summary_text(outcome);
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Budgeted red-blue median: local search, exact oracles, block decompositions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "rbmedian 0.1.0");

  unsigned threads = 1;
  std::uint64_t cap = kDefaultExactCap;

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Run the p-swap local search");
  solve_cmd->add_option("--instance", solve.instance, "Instance document")->required();
  solve_cmd->add_option("--p", solve.p, "Swaps per colour")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--epsilon", solve.epsilon, "Acceptance slack (0: strict improvement)")
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--rule", solve.rule, "best or first improvement")
      ->check(CLI::IsMember({"best", "first"}));
  solve_cmd->add_option("--seed", solve.seed, "Seed for the random initial solution");
  solve_cmd->add_option("--initial", solve.initial, "Initial solution document");
  solve_cmd->add_option("--out", solve.out, "Write the result here instead of stdout");
  solve_cmd->add_option("--max-iters", solve.max_iters, "Iteration cap");
  solve_cmd->add_flag("--parallel", solve.parallel, "Scan neighbourhoods on several threads");
  solve_cmd->add_option("--threads", solve.threads, "Worker threads (0: all cores)");

  std::string instance, solution, local, global, out_path, summary_path, spec_path;
  std::size_t p = 1;
  bool disjoint = false, verify = false;
  std::int64_t gap_p = 1, gap_ell = 2;

  auto* exact_cmd = app.add_subcommand("exact", "Exhaustive optimum");
  exact_cmd->add_option("--instance", instance, "Instance document")->required();
  exact_cmd->add_option("--out", out_path, "Write the result here instead of stdout");
  exact_cmd->add_option("--cap", cap, "Refuse spaces larger than this");
  exact_cmd->add_option("--threads", threads, "Worker threads");

  auto* verify_cmd = app.add_subcommand("verify", "Check p-swap local optimality");
  verify_cmd->add_option("--instance", instance, "Instance document")->required();
  verify_cmd->add_option("--solution", solution, "Solution document")->required();
  verify_cmd->add_option("--p", p, "Swaps per colour")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--cap", cap, "Refuse neighbourhoods larger than this");
  verify_cmd->add_option("--threads", threads, "Worker threads");
  verify_cmd->add_option("--out", out_path, "Also write the verdict document here");

  auto* decompose_cmd = app.add_subcommand("decompose", "Group and block decomposition of (S, O)");
  decompose_cmd->add_option("--instance", instance, "Instance document")->required();
  decompose_cmd->add_option("--local", local, "Local solution S")->required();
  decompose_cmd->add_option("--global", global, "Global solution O")->required();
  decompose_cmd->add_option("--out", out_path, "Write the report here instead of stdout");
  decompose_cmd->add_flag("--disjointify", disjoint, "Duplicate facilities shared by S and O");

  auto* gengap_cmd = app.add_subcommand("gengap", "Generate a tight locality-gap instance");
  gengap_cmd->add_option("--p", gap_p, "Swap size the instance is tight for")->required();
  gengap_cmd->add_option("--ell", gap_ell, "Size parameter, at least 2p")->required();
  gengap_cmd->add_option("--out", out_path, "Output directory");
  gengap_cmd->add_flag("--verify", verify, "Check costs, optimum and local optimality");
  gengap_cmd->add_option("--cap", cap, "Exhaustive-search cap for the verification");
  gengap_cmd->add_option("--threads", threads, "Worker threads");

  auto* experiment_cmd = app.add_subcommand("experiment", "Run an experiment spec to CSV");
  experiment_cmd->add_option("--spec", spec_path, "Experiment spec document")->required();
  experiment_cmd->add_option("--out", out_path, "CSV output path (default stdout)");
  experiment_cmd->add_option("--summary", summary_path, "Per-p ratio summary (JSON)");

  std::vector<std::string> storage{"rbmedian"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& s : storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*solve_cmd) return cmd_solve(solve, out);
    if (*exact_cmd) return cmd_exact(instance, out_path, cap, threads, out);
    if (*verify_cmd) return cmd_verify(instance, solution, p, cap, threads, out_path, out);
    if (*decompose_cmd) return cmd_decompose(instance, local, global, disjoint, out_path, out);
    if (*gengap_cmd) return cmd_gengap(gap_p, gap_ell, out_path, verify, cap, threads, out);
    if (*experiment_cmd) return cmd_experiment(spec_path, out_path, summary_path, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const CapExceeded& e) {
    err << "refused: " << e.what() << "\n";
    return kExitCapRefused;
  } catch (const InternalError& e) {
    err << "internal check failed: " << e.what() << "\n";
    return kExitVerificationFailed;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace rbm::cli
