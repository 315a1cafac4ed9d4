#pragma once

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rbmedian/combinatorics.hpp"
#include "rbmedian/instance.hpp"

namespace rbm {

/// Close/open sets for each colour. Each list is sorted; close and open of
/// the same colour have equal size.
struct SwapMove {
  std::vector<Location> close_red;
  std::vector<Location> open_red;
  std::vector<Location> close_blue;
  std::vector<Location> open_blue;

  bool empty() const noexcept { return close_red.empty() && close_blue.empty(); }
  std::size_t red_size() const noexcept { return close_red.size(); }
  std::size_t blue_size() const noexcept { return close_blue.size(); }

  friend bool operator==(const SwapMove&, const SwapMove&) = default;
};

std::string describe(const SwapMove& move);

/// Throws InputError unless `move` is a valid swap against `sol`.
template <DistanceValue D>
void check_move(const Instance<D>& inst, const Solution& sol, const SwapMove& move);

Solution apply(const Solution& sol, const SwapMove& move);

/// Number of non-empty moves with at most p swaps per colour:
/// Σ_a C(k_r,a)C(|R|-k_r,a) · Σ_b C(k_b,b)C(|B|-k_b,b) − 1, saturating.
std::uint64_t neighborhood_size(std::size_t n_red, std::size_t k_r, std::size_t n_blue,
                                std::size_t k_b, std::size_t p);

template <DistanceValue D>
std::uint64_t neighborhood_size(const Instance<D>& inst, std::size_t p) {
  return neighborhood_size(inst.red().size(), inst.k_r(), inst.blue().size(), inst.k_b(), p);
}

/// Every non-empty ≤p-per-colour swap of a solution, in canonical order:
/// by total swap size a+b, then red size a, then lexicographically by
/// (close_red, open_red, close_blue, open_blue) index tuples.
class Neighborhood {
 public:
  Neighborhood(std::vector<Location> red_in, std::vector<Location> red_out,
               std::vector<Location> blue_in, std::vector<Location> blue_out, std::size_t p);

  template <DistanceValue D>
  static Neighborhood of(const Instance<D>& inst, const Solution& sol, std::size_t p);

  class iterator {
   public:
    using value_type = SwapMove;
    using difference_type = std::ptrdiff_t;
    using reference = const SwapMove&;
    using pointer = const SwapMove*;
    using iterator_category = std::input_iterator_tag;

    iterator() = default;

    reference operator*() const { return move_; }
    pointer operator->() const { return &move_; }
    iterator& operator++();
    void operator++(int) { ++*this; }

    /// Position of the current move in canonical order.
    std::uint64_t index() const noexcept { return index_; }

    friend bool operator==(const iterator& a, const iterator& b) { return a.done_ == b.done_; }

   private:
    friend class Neighborhood;
    explicit iterator(const Neighborhood* hood);
    bool start_size_class();
    void materialize();

    const Neighborhood* hood_ = nullptr;
    std::size_t size_class_ = 0;
    std::vector<CombinationCursor> cursors_;  // close_red, open_red, close_blue, open_blue
    SwapMove move_;
    std::uint64_t index_ = 0;
    bool done_ = true;
  };

  iterator begin() const { return iterator(this); }
  iterator end() const { return iterator(); }
  std::uint64_t size() const;

 private:
  std::vector<Location> red_in_, red_out_, blue_in_, blue_out_;
  std::vector<std::pair<std::size_t, std::size_t>> size_classes_;
};

/// cost(sol after move) − cost(sol), touching only the clients the move can
/// affect. `asg` must be evaluate(inst, sol).
template <DistanceValue D>
D delta_cost(const Instance<D>& inst, const Solution& sol, const Assignment<D>& asg,
             const SwapMove& move);

enum class SearchRule { kBestImprovement, kFirstImprovement };

struct SearchConfig {
  std::size_t p = 1;
  /// 0 selects the strict-improvement rule; > 0 requires
  /// cost' <= (1 - epsilon/Δ)·cost with Δ = number of locations.
  double epsilon = 0.0;
  SearchRule rule = SearchRule::kBestImprovement;
  std::uint64_t seed = 0;
  std::uint64_t max_iters = 1'000'000;
  bool parallel = false;
  /// Worker count when parallel; 0 picks hardware concurrency.
  unsigned threads = 0;
};

enum class Termination { kLocalOptimum, kIterationCap };

inline const char* to_string(Termination t) {
  return t == Termination::kLocalOptimum ? "local-optimum" : "iteration-cap";
}

template <DistanceValue D>
struct SearchResult {
  Solution solution;
  Assignment<D> assignment;
  std::uint64_t iterations = 0;
  /// Cost of the initial solution followed by the cost after each accepted move.
  std::vector<D> trace;
  Termination termination = Termination::kLocalOptimum;
};

/// Relative slack below which a floating-point delta is treated as zero.
inline constexpr double kFloatImprovementTolerance = 1e-12;

/// True if `delta` is a strict improvement of `current`. Exact for integer
/// distances; floating deltas must beat a tiny relative tolerance.
template <DistanceValue D>
bool is_improving(D current, D delta);

/// Acceptance test of the search: strict improvement, plus
/// current + delta <= (1 - epsilon/delta_n)·current when epsilon > 0.
template <DistanceValue D>
bool accepts(D current, D delta, double epsilon, std::size_t delta_n);

/// ceil((delta_n/epsilon)·ln(cost0/cost_final)): the most improving steps the
/// epsilon rule can take between the two costs. +inf if cost_final is 0.
double iteration_bound(std::size_t delta_n, double epsilon, double cost0, double cost_final);

/// The p-swap heuristic. Starts from `initial` or from
/// random_solution(inst, config.seed).
template <DistanceValue D>
SearchResult<D> run(const Instance<D>& inst, const SearchConfig& config,
                    const std::optional<Solution>& initial = std::nullopt);

/// Best move found by one neighbourhood scan.
template <DistanceValue D>
struct ScanResult {
  std::optional<SwapMove> move;
  D delta{0};
  std::uint64_t index = 0;
  std::uint64_t scanned = 0;
};

enum class ScanMode {
  kBest,        // lowest delta, ties to the earliest move
  kFirstAccepted,  // earliest move passing accepts()
};

/// Scans the neighbourhood of `sol`; with `threads` > 1 the moves are
/// partitioned by index and reduced in canonical order, so the result does
/// not depend on the thread count.
template <DistanceValue D>
ScanResult<D> scan_neighborhood(const Instance<D>& inst, const Solution& sol,
                                const Assignment<D>& asg, std::size_t p, ScanMode mode,
                                double epsilon, unsigned threads);

}  // namespace rbm
