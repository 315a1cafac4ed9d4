#pragma once

// Independent reference implementations used as test oracles. They share no
// code with the library beyond the Instance accessors: plain loops and
// bitmask enumeration instead of cursors and incremental evaluation.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "rbmedian/instance.hpp"

namespace rbm::testing {

template <DistanceValue D>
D naive_cost(const Instance<D>& inst, const Solution& sol) {
  D total{0};
  for (const Location j : inst.clients()) {
    D best = std::numeric_limits<D>::max();
    for (const Location i : sol.red) best = std::min(best, inst.distance(j, i));
    for (const Location i : sol.blue) best = std::min(best, inst.distance(j, i));
    total += best;
  }
  return total;
}

inline std::vector<Location> pick(std::span<const Location> pool, std::uint32_t mask) {
  std::vector<Location> out;
  for (std::size_t t = 0; t < pool.size(); ++t) {
    if (mask >> t & 1u) out.push_back(pool[t]);
  }
  return out;
}

/// Minimum cost over every feasible solution by bitmask enumeration.
template <DistanceValue D>
D naive_opt(const Instance<D>& inst) {
  const auto nr = inst.red().size();
  const auto nb = inst.blue().size();
  D best = std::numeric_limits<D>::max();
  for (std::uint32_t rm = 0; rm < (1u << nr); ++rm) {
    if (static_cast<std::size_t>(std::popcount(rm)) != inst.k_r()) continue;
    for (std::uint32_t bm = 0; bm < (1u << nb); ++bm) {
      if (static_cast<std::size_t>(std::popcount(bm)) != inst.k_b()) continue;
      best = std::min(best, naive_cost(inst, Solution{pick(inst.red(), rm), pick(inst.blue(), bm)}));
    }
  }
  return best;
}

/// Counts solutions within ≤p swaps per colour of the one opening the first
/// k facilities of each colour, excluding that solution itself.
inline std::uint64_t naive_neighborhood_count(std::size_t n_red, std::size_t k_r,
                                              std::size_t n_blue, std::size_t k_b,
                                              std::size_t p) {
  const auto count = [p](std::size_t n, std::size_t k) {
    const std::uint32_t base = (1u << k) - 1;
    std::uint64_t c = 0;
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
      if (static_cast<std::size_t>(std::popcount(m)) != k) continue;
      if (static_cast<std::size_t>(std::popcount(base & ~m)) <= p) ++c;
    }
    return c;
  };
  return count(n_red, k_r) * count(n_blue, k_b) - 1;
}

/// Small random integer instance: grid points with Manhattan distances and
/// random sizes and budgets. Each colour's budget may be zero, but not both.
inline Instance<std::int64_t> random_grid_instance(std::uint64_t seed, std::size_t max_clients,
                                                   std::size_t max_red, std::size_t max_blue,
                                                   std::int64_t grid = 12) {
  std::mt19937_64 rng(seed);
  const auto in = [&rng](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  GeneratorParams g;
  g.n_clients = in(1, max_clients);
  g.n_red = in(1, max_red);
  g.n_blue = in(1, max_blue);
  g.k_r = in(0, g.n_red);
  g.k_b = in(g.k_r == 0 ? 1 : 0, g.n_blue);
  g.seed = seed * 7919 + 1;
  return gen_grid(g, grid);
}

inline Instance<double> random_euclidean_instance(std::uint64_t seed, std::size_t max_clients,
                                                  std::size_t max_red, std::size_t max_blue) {
  std::mt19937_64 rng(seed);
  const auto in = [&rng](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  GeneratorParams g;
  g.n_clients = in(1, max_clients);
  g.n_red = in(1, max_red);
  g.n_blue = in(1, max_blue);
  g.k_r = in(0, g.n_red);
  g.k_b = in(g.k_r == 0 ? 1 : 0, g.n_blue);
  g.seed = seed * 104729 + 3;
  return gen_euclidean(g, 100.0);
}

/// Points on a line with |x − y| distances; roles given by index lists.
inline Instance<std::int64_t> line_instance(const std::vector<std::int64_t>& x,
                                            std::vector<Location> clients,
                                            std::vector<Location> red,
                                            std::vector<Location> blue, std::size_t k_r,
                                            std::size_t k_b) {
  std::vector<std::vector<std::int64_t>> table(x.size(), std::vector<std::int64_t>(x.size()));
  for (std::size_t a = 0; a < x.size(); ++a) {
    for (std::size_t b = 0; b < x.size(); ++b) table[a][b] = std::abs(x[a] - x[b]);
  }
  return Instance<std::int64_t>(MetricSpace<std::int64_t>::from_matrix(table), std::move(clients),
                                std::move(red), std::move(blue), k_r, k_b);
}

inline bool near(double a, double b, double rel = 1e-9) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

/// FNV-1a over a byte string, for snapshot checksums.
inline std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace rbm::testing
