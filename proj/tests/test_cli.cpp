#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "experiment.hpp"
#include "rbmedian/gap.hpp"
#include "rbmedian/io.hpp"
#include "support.hpp"

namespace rbm::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("rbmedian-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string gengap(std::int64_t p, std::int64_t ell) const {
    const std::string d = path("gap-" + std::to_string(p) + "-" + std::to_string(ell));
    EXPECT_EQ(cli({"gengap", "--p", std::to_string(p), "--ell", std::to_string(ell), "--out", d}).code, 0);
    return d;
  }

  fs::path dir_;
};

TEST_F(CliTest, SolveFromTheDesignatedLocalSolution) {
  const std::string g = gengap(1, 2);
  const CliRun r = cli({"solve", "--instance", g + "/instance.json", "--initial", g + "/local.json",
                     "--p", "1", "--out", path("result.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = json::parse(read_file(path("result.json")));
  EXPECT_EQ(doc["cost"], 11);
  EXPECT_EQ(doc["iterations"], 0);
  EXPECT_EQ(doc["termination"], "local-optimum");

  const CliRun r2 = cli({"solve", "--instance", g + "/instance.json", "--initial", g + "/local.json",
                      "--p", "2"});
  ASSERT_EQ(r2.code, 0) << r2.err;
  EXPECT_LT(json::parse(r2.out)["cost"].get<int>(), 11);
}

TEST_F(CliTest, SolveIsDeterministic) {
  write_file(path("i.json"), serialize(testing::random_grid_instance(3, 12, 6, 6)));
  const std::vector<std::string> args{"solve", "--instance", path("i.json"), "--seed", "9", "--p", "2"};
  const CliRun a = cli(args);
  const CliRun b = cli(args);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  auto parallel = args;
  parallel.insert(parallel.end(), {"--parallel", "--threads", "3"});
  EXPECT_EQ(cli(parallel).out, a.out);
}

TEST_F(CliTest, MalformedInputIsExitTwo) {
  write_file(path("bad.json"), "{\"n\": ");
  const CliRun r = cli({"solve", "--instance", path("bad.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("malformed"), std::string::npos) << r.err;
  EXPECT_EQ(cli({"solve", "--instance", path("missing.json")}).code, 2);
  EXPECT_EQ(cli({"solve"}).code, 2);
  EXPECT_EQ(cli({"bogus"}).code, 2);
  const std::string g = gengap(1, 2);
  write_file(path("infeasible.json"), R"({"R": [0], "B": []})");
  EXPECT_EQ(cli({"solve", "--instance", g + "/instance.json", "--initial", path("infeasible.json")}).code, 2);
}

TEST_F(CliTest, Exact) {
  const std::string g = gengap(1, 2);
  const CliRun r = cli({"exact", "--instance", g + "/instance.json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["cost"], 3);
  EXPECT_EQ(cli({"exact", "--instance", g + "/instance.json", "--cap", "10"}).code, 3);

  write_file(path("single.json"), R"({"n": 3, "metric": {"matrix": [[0,2,5],[2,0,3],[5,3,0]]},
      "clients": [0, 2], "red": [1], "blue": [], "k_r": 1, "k_b": 0})");
  const CliRun s = cli({"exact", "--instance", path("single.json")});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(json::parse(s.out)["cost"], 5);
}

TEST_F(CliTest, Verify) {
  const std::string g = gengap(1, 4);
  const CliRun local = cli({"verify", "--instance", g + "/instance.json", "--solution", g + "/local.json", "--p", "1"});
  EXPECT_EQ(local.code, 0);
  EXPECT_NE(local.out.find("locally optimal"), std::string::npos);
  const CliRun global = cli({"verify", "--instance", g + "/instance.json", "--solution", g + "/global.json", "--p", "1"});
  EXPECT_EQ(global.code, 0);

  // Swap one designated local blue for an unused one far from its clients.
  const GapInstance gap = build_gap({1, 4});
  Solution perturbed = gap.local;
  perturbed.blue.front() = gap.layout.right_global.front();
  perturbed = Solution::sorted(perturbed.red, perturbed.blue);
  write_file(path("perturbed.json"), serialize(perturbed));
  const CliRun bad = cli({"verify", "--instance", g + "/instance.json", "--solution", path("perturbed.json"),
                       "--p", "1", "--out", path("verdict.json")});
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("witness"), std::string::npos) << bad.out;
  EXPECT_FALSE(json::parse(read_file(path("verdict.json")))["locally_optimal"].get<bool>());
  EXPECT_EQ(cli({"verify", "--instance", g + "/instance.json", "--solution", g + "/local.json", "--cap", "3"}).code, 3);
}

TEST_F(CliTest, Decompose) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto inst = testing::random_grid_instance(60 + seed, 12, 6, 6);
    write_file(path("i.json"), serialize(inst));
    write_file(path("s.json"), serialize(random_solution(inst, seed)));
    write_file(path("o.json"), serialize(random_solution(inst, seed + 50)));
    const CliRun r = cli({"decompose", "--instance", path("i.json"), "--local", path("s.json"), "--global",
                       path("o.json"), "--disjointify"});
    ASSERT_EQ(r.code, 0) << r.err;
    const json doc = json::parse(r.out);
    EXPECT_TRUE(doc["ok"].get<bool>());
    EXPECT_TRUE(doc["checks"]["block_properties"]["ok"].get<bool>());
    EXPECT_EQ(doc["checks"]["rerouting_bounds"]["phi_reroute"]["violations"], 0);
  }

  // Overlap without --disjointify is an input error.
  const std::string g = gengap(1, 2);
  EXPECT_EQ(cli({"decompose", "--instance", g + "/instance.json", "--local", g + "/local.json", "--global",
                 g + "/local.json"}).code,
            2);

  // Matched pairs: every group balanced.
  write_file(path("m.json"), serialize(testing::line_instance({0, 1, 100, 101, 0, 100}, {4, 5}, {0, 1},
                                                              {2, 3}, 1, 1)));
  write_file(path("ms.json"), R"({"R": [0], "B": [2]})");
  write_file(path("mo.json"), R"({"R": [1], "B": [3]})");
  const CliRun m = cli({"decompose", "--instance", path("m.json"), "--local", path("ms.json"), "--global",
                     path("mo.json"), "--out", path("dec.json")});
  ASSERT_EQ(m.code, 0) << m.err;
  const json doc = json::parse(read_file(path("dec.json")));
  ASSERT_EQ(doc["groups"].size(), 2u);
  for (const auto& group : doc["groups"]) EXPECT_EQ(group["class"], "balanced");
}

TEST_F(CliTest, GengapWritesDocumentsAndVerifies) {
  const std::string d = path("g");
  const CliRun r = cli({"gengap", "--p", "1", "--ell", "2", "--out", d, "--verify"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"instance.json", "local.json", "global.json", "expected.json", "verify.json"}) {
    EXPECT_TRUE(fs::exists(fs::path(d) / f)) << f;
  }
  const json expected = json::parse(read_file(d + "/expected.json"));
  EXPECT_EQ(expected["expected_local_cost"], 11);
  EXPECT_EQ(expected["expected_global_cost"], 3);
  EXPECT_EQ(expected["expected_ratio"], "11/3");
  EXPECT_TRUE(json::parse(read_file(d + "/verify.json"))["ok"].get<bool>());
  EXPECT_EQ(cli({"gengap", "--p", "2", "--ell", "3"}).code, 2);
}

TEST_F(CliTest, ExperimentEmptyCorpusGivesHeaderOnly) {
  fs::create_directories(path("corpus"));
  write_file(path("spec.json"), R"({"corpus": "corpus", "p": [1, 2], "seeds": [0]})");
  const CliRun r = cli({"experiment", "--spec", path("spec.json"), "--out", path("out.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(read_file(path("out.csv")),
            std::string(kCsvVersionLine) + "\ninstance,p,seed,local_cost,opt,ratio,iterations,wall_time_ms,status\n");
}

TEST_F(CliTest, ExperimentRecordsRowFailuresAndContinues) {
  write_file(path("good.json"), serialize(testing::random_grid_instance(1, 8, 4, 4)));
  write_file(path("bad.json"), "not json");
  write_file(path("spec.json"), R"({"instances": ["bad.json", "good.json"], "p": [1], "seeds": [0, 1]})");
  const CliRun r = cli({"experiment", "--spec", path("spec.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_NE(rows[2].find("error"), std::string::npos);
  EXPECT_EQ(rows[4].rfind("good.json,1,0,", 0), 0u) << rows[4];
  EXPECT_NE(rows[4].find(",ok"), std::string::npos);
}

TEST_F(CliTest, ExperimentRejectsInvalidSpecs) {
  write_file(path("spec.json"), R"({"p": [0]})");
  EXPECT_EQ(cli({"experiment", "--spec", path("spec.json")}).code, 2);
  write_file(path("spec2.json"), R"({"corpus": "nowhere"})");
  EXPECT_EQ(cli({"experiment", "--spec", path("spec2.json")}).code, 2);
}

TEST(Experiment, GapCorpusRatiosMatchTheClosedForm) {
  // p = 3 neighbourhoods reach 10^8 moves per scan, so the corpus stops at p = 2
  // with short ranges; the command itself accepts any range.
  ExperimentSpec spec = parse_experiment_spec(R"({"gap": {"p": [1, 2], "ell_max": 8}, "seeds": [0], "threads": 4})", "");
  const ExperimentOutcome out = run_experiment(spec);
  std::size_t i = 0;
  for (std::int64_t p = 1; p <= 2; ++p) {
    for (std::int64_t ell = 2 * p; ell <= 8; ++ell, ++i) {
      ASSERT_LT(i, out.rows.size());
      const ExperimentRow& row = out.rows[i];
      const GapParams g{p, ell};
      EXPECT_EQ(row.instance, "gap-p" + std::to_string(p) + "-l" + std::to_string(ell));
      EXPECT_EQ(row.p, static_cast<std::size_t>(p));
      EXPECT_EQ(row.local_cost, std::to_string(g.local_cost()));
      EXPECT_EQ(row.opt, std::to_string(g.global_cost()));
      EXPECT_EQ(row.iterations, 0u);
      ASSERT_TRUE(row.ratio.has_value());
      EXPECT_DOUBLE_EQ(*row.ratio, boost::rational_cast<double>(g.ratio()));
    }
  }
  EXPECT_EQ(i, out.rows.size());
}

TEST(Experiment, DeterministicAcrossThreadCounts) {
  const char* text = R"({"euclidean": {"count": 6, "n_clients": 10, "n_red": 4, "n_blue": 4, "k_r": 2, "k_b": 2},
                         "grid": {"count": 4, "n_clients": 10, "n_red": 4, "n_blue": 4, "k_r": 1, "k_b": 2},
                         "p": [1, 2], "seeds": [0, 5], "threads": 1})";
  ExperimentSpec spec = parse_experiment_spec(text, "");
  const std::string serial = to_csv(run_experiment(spec), false);
  spec.threads = 4;
  EXPECT_EQ(to_csv(run_experiment(spec), false), serial);
  EXPECT_EQ(to_csv(run_experiment(spec), false), serial);
}

TEST(Experiment, SummaryFlagsRatiosAboveSeven) {
  std::vector<ExperimentRow> rows{{"a", 1, 0, "8", "1", 8.0, 0, 0.0, "ok"},
                                  {"b", 1, 0, "2", "1", 2.0, 0, 0.0, "ok"},
                                  {"c", 1, 0, "2", "", std::nullopt, 0, 0.0, "ok"},
                                  {"d", 2, 0, "7.5", "1", 7.5, 0, 0.0, "ok"}};
  ExperimentOutcome out{rows, summarize(rows)};
  EXPECT_EQ(out.summary.at(1).rows, 3u);
  EXPECT_EQ(out.summary.at(1).rows_with_opt, 2u);
  EXPECT_EQ(out.summary.at(1).max_ratio, 8.0);
  EXPECT_EQ(out.summary.at(1).mean_ratio, 5.0);
  EXPECT_TRUE(out.summary.at(1).flagged);
  EXPECT_FALSE(out.summary.at(2).flagged);
  EXPECT_NE(summary_text(out).find("FLAGGED"), std::string::npos);
}

}  // namespace
}  // namespace rbm::cli
