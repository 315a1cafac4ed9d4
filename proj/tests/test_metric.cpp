#include <gtest/gtest.h>

#include <random>

#include "rbmedian/gap.hpp"
#include "rbmedian/metric.hpp"

namespace rbm {
namespace {

using IntSpace = MetricSpace<std::int64_t>;

TEST(Metric, SinglePoint) {
  const auto m = IntSpace::from_matrix({{0}});
  EXPECT_EQ(m.size(), 1u);
  EXPECT_EQ(m(0, 0), 0);
}

TEST(Metric, TwoPoints) {
  const auto m = IntSpace::from_matrix({{0, 1}, {1, 0}});
  EXPECT_EQ(m(0, 1), 1);
  EXPECT_EQ(m(1, 0), 1);
}

TEST(Metric, ZeroDistanceBetweenDistinctPointsIsAllowed) {
  EXPECT_NO_THROW(IntSpace::from_matrix({{0, 0, 2}, {0, 0, 2}, {2, 2, 0}}));
}

TEST(Metric, TriangleViolationNamesThePair) {
  try {
    IntSpace::from_matrix({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}});
    FAIL() << "expected a triangle violation";
  } catch (const MetricError& e) {
    EXPECT_EQ(e.kind(), MetricError::Kind::kTriangle);
    EXPECT_EQ(e.i(), 0u);
    EXPECT_EQ(e.j(), 2u);
    EXPECT_EQ(e.k(), 1u);
  }
}

TEST(Metric, TriangleCheckCanBeSkipped) {
  ValidationOptions opts;
  opts.triangle = TriangleCheck::kNever;
  EXPECT_NO_THROW(IntSpace::from_matrix({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}, opts));
}

TEST(Metric, RejectsMalformedTables) {
  const auto kind_of = [](const std::vector<std::vector<std::int64_t>>& t) {
    try {
      IntSpace::from_matrix(t);
    } catch (const MetricError& e) {
      return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return MetricError::Kind::kBadEdge;
  };
  EXPECT_EQ(kind_of({{0, 1}, {1}}), MetricError::Kind::kNotSquare);
  EXPECT_EQ(kind_of({{0, -1}, {-1, 0}}), MetricError::Kind::kNegative);
  EXPECT_EQ(kind_of({{1, 1}, {1, 0}}), MetricError::Kind::kNonzeroDiagonal);
  EXPECT_EQ(kind_of({{0, 1}, {2, 0}}), MetricError::Kind::kAsymmetric);
}

TEST(Metric, FloatToleranceAbsorbsRounding) {
  const double a = 0.1 + 0.2;
  EXPECT_NO_THROW(MetricSpace<double>::from_matrix({{0, 0.1, a}, {0.1, 0, 0.2}, {a, 0.2, 0}}));
  EXPECT_NO_THROW(MetricSpace<double>::from_matrix({{0, 1.0}, {1.0 + 1e-12, 0}}));
  EXPECT_THROW(MetricSpace<double>::from_matrix({{0, 1.0}, {1.0 + 1e-6, 0}}), MetricError);
}

TEST(Metric, PathGraph) {
  GraphSpec<std::int64_t> g{3, {{0, 1, 1}, {1, 2, 1}}};
  const auto m = IntSpace::from_graph(g);
  EXPECT_EQ(m(0, 2), 2);
  EXPECT_FALSE(m.sentinel().has_value());
}

TEST(Metric, ParallelEdgesKeepTheShortest) {
  GraphSpec<std::int64_t> g{2, {{0, 1, 5}, {1, 0, 2}}};
  EXPECT_EQ(IntSpace::from_graph(g)(0, 1), 2);
}

TEST(Metric, IsolatedVerticesGetTheSentinel) {
  GraphSpec<std::int64_t> g{2, {}};
  const auto m = IntSpace::from_graph(g);
  EXPECT_EQ(m(0, 1), 1);
  EXPECT_EQ(m.sentinel(), 1);
}

TEST(Metric, SentinelRejectPolicy) {
  GraphSpec<std::int64_t> g{3, {{0, 1, 4}}, SentinelPolicy::kReject};
  try {
    IntSpace::from_graph(g);
    FAIL();
  } catch (const MetricError& e) {
    EXPECT_EQ(e.kind(), MetricError::Kind::kDisconnected);
  }
}

TEST(Metric, BadEdges) {
  EXPECT_THROW(IntSpace::from_graph({2, {{0, 2, 1}}}), MetricError);
  EXPECT_THROW(IntSpace::from_graph({2, {{0, 1, -1}}}), MetricError);
}

TEST(Metric, SmallGapGraphDistances) {
  // (p, ell) = (1, 2): edge lengths sum to 2·2 (left) + 2·2 (middle) + 3 + 3
  // (right, two unit edges per right client) = 14, so the sentinel is 15.
  const GapInstance gap = build_gap({1, 2});
  const auto& m = gap.instance.space();
  const auto& L = gap.layout;
  ASSERT_EQ(m.sentinel(), 15);
  for (std::size_t t = 0; t < L.left_clients.size(); ++t) {
    EXPECT_EQ(m(L.left_clients[t], L.left_global[t]), 0);
    EXPECT_EQ(m(L.left_clients[t], L.left_local), 2);
    for (const Location r : L.right_local) EXPECT_EQ(m(L.left_clients[t], r), 15);
    for (const auto& cs : L.right_clients) {
      for (const Location c : cs) EXPECT_EQ(m(L.left_clients[t], c), 15);
    }
    for (const Location o : L.right_global) EXPECT_EQ(m(L.left_clients[t], o), 15);
  }
  // Left client to left client goes through the local red: α + α.
  EXPECT_EQ(m(L.left_clients[0], L.left_clients[1]), 4);
  // Right group: a client is 1 from its local blue and 1 from o_1.
  EXPECT_EQ(m(L.right_clients[0][0], L.right_local[0]), 1);
  EXPECT_EQ(m(L.right_clients[0][0], L.right_global[0]), 1);
  EXPECT_EQ(m(L.right_clients[0][0], L.right_local[1]), 3);
}

std::vector<std::vector<std::int64_t>> random_table(std::mt19937_64& rng, std::size_t n) {
  std::uniform_int_distribution<std::int64_t> len(0, 20);
  std::vector<std::vector<std::int64_t>> t(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) t[a][b] = t[b][a] = len(rng);
  }
  return t;
}

TEST(MetricProperty, ClosureIsAMetricAndIdempotent) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng() % 9;
    ValidationOptions loose;
    loose.triangle = TriangleCheck::kNever;
    const auto raw = IntSpace::from_matrix(random_table(rng, n), loose);
    const auto closed = raw.closure();
    EXPECT_NO_THROW(IntSpace::from_matrix(closed.to_table()));
    EXPECT_EQ(closed.closure(), closed);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        EXPECT_LE(closed(static_cast<Location>(a), static_cast<Location>(b)),
                  raw(static_cast<Location>(a), static_cast<Location>(b)));
      }
    }
  }
}

TEST(MetricProperty, GraphMetricsSatisfyTheAxioms) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    GraphSpec<std::int64_t> g;
    g.n = 1 + rng() % 10;
    const std::size_t m = rng() % 20;
    for (std::size_t e = 0; e < m; ++e) {
      g.edges.push_back({static_cast<Location>(rng() % g.n), static_cast<Location>(rng() % g.n),
                         static_cast<std::int64_t>(rng() % 10)});
    }
    const auto space = IntSpace::from_graph(g);
    EXPECT_NO_THROW(IntSpace::from_matrix(space.to_table()));
  }
}

TEST(Metric, DuplicatesCopyRowsAndSitAtZero) {
  const auto m = IntSpace::from_matrix({{0, 3, 4}, {3, 0, 5}, {4, 5, 0}});
  const std::vector<Location> src{1};
  const auto d = m.with_duplicates(src);
  ASSERT_EQ(d.size(), 4u);
  EXPECT_EQ(d(3, 1), 0);
  EXPECT_EQ(d(3, 0), 3);
  EXPECT_EQ(d(3, 2), 5);
  EXPECT_NO_THROW(IntSpace::from_matrix(d.to_table()));
}

}  // namespace
}  // namespace rbm
