#include <gtest/gtest.h>

#include "rbmedian/exact.hpp"
#include "rbmedian/gap.hpp"
#include "support.hpp"

namespace rbm {
namespace {

TEST(BruteForce, ForcedSolution) {
  const auto inst = testing::line_instance({0, 4, 9, 6}, {0, 1, 2}, {3}, {}, 1, 0);
  const auto r = brute_force_opt(inst);
  EXPECT_EQ(r.solution, (Solution{{3}, {}}));
  EXPECT_EQ(r.cost, 6 + 2 + 3);
  EXPECT_EQ(r.examined, 1u);
}

TEST(BruteForce, GapOptima) {
  EXPECT_EQ(brute_force_opt(build_gap({1, 2}).instance).cost, 3);
  EXPECT_EQ(brute_force_opt(build_gap({1, 4}).instance).cost, 5);
}

TEST(BruteForce, LargerGapOptimum) {
  const GapInstance gap = build_gap({2, 4});
  const auto r = brute_force_opt(gap.instance, kDefaultExactCap, 4);
  EXPECT_EQ(r.cost, 20);
  EXPECT_EQ(cost(gap.instance, r.solution), 20);
}

TEST(BruteForce, MatchesBitmaskOracle) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = testing::random_grid_instance(seed, 12, 7, 7);
    const auto r = brute_force_opt(inst);
    EXPECT_EQ(r.cost, testing::naive_opt(inst));
    EXPECT_EQ(cost(inst, r.solution), r.cost);
    EXPECT_EQ(r.examined, solution_space_size(inst));
  }
}

TEST(BruteForce, ReturnsTheLexicographicallyLeastOptimum) {
  // Two reds at the same point: both optimal, the lower index wins.
  const auto inst = testing::line_instance({0, 3, 3}, {0}, {1, 2}, {}, 1, 0);
  EXPECT_EQ(brute_force_opt(inst).solution, (Solution{{1}, {}}));
  EXPECT_EQ(brute_force_opt(inst, kDefaultExactCap, 4).solution, (Solution{{1}, {}}));
}

TEST(BruteForce, ThreadCountDoesNotChangeTheAnswer) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = testing::random_grid_instance(200 + seed, 12, 8, 8, 4);
    const auto a = brute_force_opt(inst, kDefaultExactCap, 1);
    const auto b = brute_force_opt(inst, kDefaultExactCap, 5);
    EXPECT_EQ(a.solution, b.solution);
    EXPECT_EQ(a.cost, b.cost);
  }
}

TEST(BruteForce, RefusesAboveTheCap) {
  const auto inst = build_gap({1, 2}).instance;
  try {
    brute_force_opt(inst, 10);
    FAIL();
  } catch (const CapExceeded& e) {
    EXPECT_EQ(e.required(), solution_space_size(inst));
    EXPECT_EQ(e.cap(), 10u);
  }
}

TEST(BruteForce, FloatInstances) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst = testing::random_euclidean_instance(seed, 10, 5, 5);
    EXPECT_TRUE(testing::near(brute_force_opt(inst).cost, testing::naive_opt(inst)));
  }
}

TEST(LocalOpt, GlobalOptimumIsLocallyOptimal) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst = testing::random_grid_instance(300 + seed, 10, 6, 6);
    const auto opt = brute_force_opt(inst);
    for (std::size_t p = 1; p <= 3; ++p) EXPECT_TRUE(is_local_opt(inst, opt.solution, p).locally_optimal);
  }
}

TEST(LocalOpt, WitnessIsTheFirstImprovingMove) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst = testing::random_grid_instance(400 + seed, 10, 6, 6);
    const Solution sol = random_solution(inst, seed);
    const auto base = testing::naive_cost(inst, sol);
    const auto verdict = is_local_opt(inst, sol, 1);
    std::optional<std::uint64_t> first;
    const Neighborhood hood = Neighborhood::of(inst, sol, 1);
    for (auto it = hood.begin(); it != hood.end(); ++it) {
      if (testing::naive_cost(inst, apply(sol, *it)) < base) {
        first = it.index();
        break;
      }
    }
    EXPECT_EQ(verdict.locally_optimal, !first.has_value());
    if (first) {
      EXPECT_EQ(verdict.witness_index, *first);
      EXPECT_LT(verdict.witness_delta, 0);
      EXPECT_EQ(testing::naive_cost(inst, apply(sol, *verdict.witness)) - base, verdict.witness_delta);
    }
  }
}

TEST(LocalOpt, ZeroDeltaMovesDoNotDisqualify) {
  // Two co-located reds: swapping them changes nothing.
  const auto inst = testing::line_instance({0, 3, 3}, {0}, {1, 2}, {}, 1, 0);
  const auto v = is_local_opt(inst, Solution{{1}, {}}, 1);
  EXPECT_TRUE(v.locally_optimal);
  EXPECT_EQ(v.scanned, 1u);
}

TEST(LocalOpt, SmallGapAtRadiusTwoHasAWitness) {
  const GapInstance gap = build_gap({1, 2});
  EXPECT_TRUE(is_local_opt(gap.instance, gap.local, 1).locally_optimal);
  const auto v = is_local_opt(gap.instance, gap.local, 2);
  ASSERT_FALSE(v.locally_optimal);
  EXPECT_LT(v.witness_delta, 0);
}

TEST(LocalOpt, RefusesAboveTheCap) {
  const GapInstance gap = build_gap({1, 2});
  EXPECT_THROW(is_local_opt(gap.instance, gap.local, 1, 5), CapExceeded);
}

TEST(CertifiedOpt, UsesBruteForceUnderTheCap) {
  const GapInstance gap = build_gap({1, 2});
  const auto c = certified_opt(gap.instance, std::span<const Solution>{});
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->cost, 3);
  EXPECT_EQ(c->source, OptSource::kBruteForce);
}

TEST(CertifiedOpt, FallsBackToTheLowerBound) {
  const GapInstance gap = build_gap({1, 20});
  ASSERT_GT(solution_space_size(gap.instance), kDefaultExactCap);
  const std::vector<Solution> candidates{gap.local, gap.global};
  const auto c = certified_opt<std::int64_t>(gap.instance, candidates);
  ASSERT_TRUE(c.has_value());
  EXPECT_EQ(c->cost, 21);
  EXPECT_EQ(c->source, OptSource::kLowerBoundCertificate);
  EXPECT_EQ(c->solution, gap.global);
  EXPECT_FALSE(certified_opt<std::int64_t>(gap.instance, std::span<const Solution>(&gap.local, 1))
                   .has_value());
}

}  // namespace
}  // namespace rbm
