#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "rbmedian/exact.hpp"
#include "rbmedian/instance.hpp"
#include "rbmedian/local_search.hpp"
#include "rbmedian/metric.hpp"

namespace rbm {

using Rational = boost::rational<std::int64_t>;

std::string to_string(const Rational& r);

/// Parameters of the tight locality-gap family; requires 1 <= p <= ell/2.
struct GapParams {
  std::int64_t p = 1;
  std::int64_t ell = 2;

  std::int64_t beta() const { return 2 * p; }
  std::int64_t alpha() const { return beta() * (ell - p); }
  std::int64_t k_r() const { return p + 1; }
  std::int64_t k_b() const { return p * (ell + 1); }

  /// Throws InputError unless 1 <= p and 2p <= ell.
  void validate() const;

  /// α(p+1) + β·pℓ + p²(ℓ+1)
  std::int64_t local_cost() const;
  /// p²(ℓ+1)
  std::int64_t global_cost() const;
  Rational ratio() const { return Rational(local_cost(), global_cost()); }
  /// 5 + 2/p − 10p/(ℓ+1)
  Rational ratio_lower_bound() const;
};

/// Where each part of the construction lives.
struct GapLayout {
  Location left_local = kNoLocation;          // the left group's local red
  std::vector<Location> left_clients;         // p+1, at distance α from left_local
  std::vector<Location> left_global;          // co-located with left_clients
  std::vector<Location> middle_local;         // p local reds, one per subgroup
  std::vector<std::vector<Location>> middle_clients;  // ℓ per subgroup, at distance β
  std::vector<std::vector<Location>> middle_global;   // co-located with middle_clients
  std::vector<Location> right_local;          // p(ℓ+1) local blues
  std::vector<std::vector<Location>> right_clients;   // p per local blue, at distance 1
  std::vector<Location> right_global;         // p blues; client t of each local blue is adjacent to the t-th
};

struct GapInstance {
  GapParams params;
  GraphSpec<std::int64_t> graph;
  Instance<std::int64_t> instance;
  GapLayout layout;
  Solution local;   // the designated local optimum
  Solution global;  // the designated global optimum
  std::int64_t expected_local_cost = 0;
  std::int64_t expected_global_cost = 0;
  Rational expected_ratio;
  Rational ratio_lower_bound;
};

/// Builds the three-group graph (left: reds at distance α, middle: p
/// subgroups at distance β, right: unit-length blue lattice), takes its
/// shortest-path closure, and attaches the designated solutions.
GapInstance build_gap(const GapParams& params);

/// Which analytic case a swap falls into, by red swap count R and whether
/// the left group's local red is closed.
std::string gap_case(const GapInstance& gap, const SwapMove& move);

struct GapCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct GapReport {
  GapParams params;
  std::vector<GapCheck> checks;
  std::int64_t local_cost = 0;
  std::int64_t global_cost = 0;
  std::optional<std::int64_t> opt_cost;
  std::optional<OptSource> opt_source;
  std::uint64_t moves_scanned = 0;
  std::optional<SwapMove> witness;
  std::int64_t witness_delta = 0;
  std::string witness_case;

  bool ok() const;
};

/// (a) designated costs equal the closed forms exactly; (b) the optimum
/// equals p²(ℓ+1), by brute force under `exhaustive_cap` or else by the
/// all-open lower bound; (c) no strictly improving ≤p swap exists from the
/// designated local solution; (d) the exact ratio meets the stated bound.
/// Throws CapExceeded if the neighbourhood itself is over the cap.
GapReport verify_gap(const GapInstance& gap, std::uint64_t exhaustive_cap = kDefaultExactCap,
                     unsigned threads = 1);

}  // namespace rbm
