#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rbmedian/metric.hpp"
#include "rbmedian/types.hpp"

namespace rbm {

/// An open-facility pair (R, B). Index lists are kept sorted ascending.
struct Solution {
  std::vector<Location> red;
  std::vector<Location> blue;

  static Solution sorted(std::vector<Location> red, std::vector<Location> blue);

  /// R ∪ B, ascending.
  std::vector<Location> open() const;

  friend bool operator==(const Solution&, const Solution&) = default;
  friend auto operator<=>(const Solution&, const Solution&) = default;
};

std::string describe(const Solution& sol);

/// Raised by evaluate() and friends when a solution does not fit the instance.
class InfeasibleSolution : public InputError {
 public:
  InfeasibleSolution(const std::string& what, std::vector<Location> offending)
      : InputError(what), offending_(std::move(offending)) {}

  const std::vector<Location>& offending() const noexcept { return offending_; }

 private:
  std::vector<Location> offending_;
};

/// Nearest-open-facility assignment. Entry t of `facility` / `distance`
/// belongs to the t-th client of the instance.
template <DistanceValue D>
struct Assignment {
  std::vector<Location> facility;
  std::vector<D> distance;
  D total{0};
};

/// Clients, red and blue facilities over a metric, with budgets k_r and k_b.
/// The three index sets partition 0..n-1 and are stored sorted.
template <DistanceValue D>
class Instance {
 public:
  Instance() = default;

  /// Throws InputError if the index sets do not partition the metric's range
  /// or if the budgets are out of bounds.
  Instance(MetricSpace<D> space, std::vector<Location> clients, std::vector<Location> red,
           std::vector<Location> blue, std::size_t k_r, std::size_t k_b);

  const MetricSpace<D>& space() const noexcept { return space_; }
  D distance(Location a, Location b) const noexcept { return space_(a, b); }
  std::size_t size() const noexcept { return space_.size(); }

  std::span<const Location> clients() const noexcept { return clients_; }
  std::span<const Location> red() const noexcept { return red_; }
  std::span<const Location> blue() const noexcept { return blue_; }
  std::span<const Location> facilities(Colour c) const noexcept {
    return c == Colour::kRed ? red() : blue();
  }
  std::size_t k_r() const noexcept { return k_r_; }
  std::size_t k_b() const noexcept { return k_b_; }
  std::size_t budget(Colour c) const noexcept { return c == Colour::kRed ? k_r_ : k_b_; }

  Role role(Location i) const noexcept { return roles_[i]; }
  std::span<const Role> roles() const noexcept { return roles_; }
  bool is_facility(Location i) const noexcept { return roles_[i] != Role::kClient; }
  /// Colour of a facility; undefined for clients.
  Colour colour(Location i) const noexcept {
    return roles_[i] == Role::kRed ? Colour::kRed : Colour::kBlue;
  }

  /// Throws InfeasibleSolution naming the offending facilities.
  void check_feasible(const Solution& sol) const;
  bool is_feasible(const Solution& sol) const;

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  MetricSpace<D> space_;
  std::vector<Location> clients_;
  std::vector<Location> red_;
  std::vector<Location> blue_;
  std::size_t k_r_ = 0;
  std::size_t k_b_ = 0;
  std::vector<Role> roles_;
};

/// cost(R ∪ B): each client goes to a nearest open facility, ties to the
/// lowest facility index.
template <DistanceValue D>
Assignment<D> evaluate(const Instance<D>& inst, const Solution& sol);

/// Convenience wrapper returning only the total.
template <DistanceValue D>
D cost(const Instance<D>& inst, const Solution& sol) {
  return evaluate(inst, sol).total;
}

/// Σ_j min over all facilities of d(j, i): the cost with every facility
/// open, a lower bound on every feasible solution.
template <DistanceValue D>
D all_open_lower_bound(const Instance<D>& inst);

template <DistanceValue D>
struct DisjointPair {
  Instance<D> instance;
  Solution local;
  Solution global;
  /// duplicates[t] is the original location copied to index n + t.
  std::vector<Location> duplicates;
};

/// Duplicates every facility in S ∩ O at distance 0 so that the returned S
/// keeps the originals and O uses the copies. Costs are unchanged.
template <DistanceValue D>
DisjointPair<D> disjointify(const Instance<D>& inst, const Solution& local,
                            const Solution& global);

/// Uniformly random feasible solution, deterministic in seed.
template <DistanceValue D>
Solution random_solution(const Instance<D>& inst, std::uint64_t seed);

struct GeneratorParams {
  std::size_t n_clients = 10;
  std::size_t n_red = 4;
  std::size_t n_blue = 4;
  std::size_t k_r = 2;
  std::size_t k_b = 2;
  std::uint64_t seed = 1;
};

/// Uniform points in [0, box_size)^2 with Euclidean distances. Locations are
/// laid out as clients, then red, then blue.
Instance<double> gen_euclidean(const GeneratorParams& params, double box_size);

/// Uniform integer points in {0..grid-1}^2 with Manhattan distances; an exact
/// integer counterpart of gen_euclidean.
Instance<std::int64_t> gen_grid(const GeneratorParams& params, std::int64_t grid);

extern template class Instance<std::int64_t>;
extern template class Instance<double>;

}  // namespace rbm
