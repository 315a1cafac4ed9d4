#include "rbmedian/instance.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <sstream>

#include "rbmedian/random.hpp"

namespace rbm {
namespace {

std::string join(std::span<const Location> ids) {
  std::ostringstream os;
  os << '{';
  for (std::size_t t = 0; t < ids.size(); ++t) os << (t ? "," : "") << ids[t];
  os << '}';
  return os.str();
}

void check_colour_set(std::span<const Role> roles, std::span<const Location> chosen,
                      Role expected, std::size_t budget, const char* name) {
  std::vector<Location> sorted(chosen.begin(), chosen.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<Location> offending;
  for (std::size_t t = 0; t < sorted.size(); ++t) {
    const Location f = sorted[t];
    if (f >= roles.size() || roles[f] != expected || (t > 0 && sorted[t - 1] == f)) {
      offending.push_back(f);
    }
  }
  if (!offending.empty()) {
    throw InfeasibleSolution(std::string(name) + " contains facilities that are duplicated " +
                                 "or not of the right colour: " + join(offending),
                             offending);
  }
  if (sorted.size() != budget) {
    throw InfeasibleSolution(std::string(name) + " opens " + std::to_string(sorted.size()) +
                                 " facilities but the budget is " + std::to_string(budget) +
                                 ": " + join(sorted),
                             sorted);
  }
}

}  // namespace

Solution Solution::sorted(std::vector<Location> red, std::vector<Location> blue) {
  std::sort(red.begin(), red.end());
  std::sort(blue.begin(), blue.end());
  return Solution{std::move(red), std::move(blue)};
}

std::vector<Location> Solution::open() const {
  std::vector<Location> out;
  out.reserve(red.size() + blue.size());
  std::merge(red.begin(), red.end(), blue.begin(), blue.end(), std::back_inserter(out));
  return out;
}

std::string describe(const Solution& sol) {
  return "R=" + join(sol.red) + " B=" + join(sol.blue);
}

template <DistanceValue D>
Instance<D>::Instance(MetricSpace<D> space, std::vector<Location> clients,
                      std::vector<Location> red, std::vector<Location> blue, std::size_t k_r,
                      std::size_t k_b)
    : space_(std::move(space)),
      clients_(std::move(clients)),
      red_(std::move(red)),
      blue_(std::move(blue)),
      k_r_(k_r),
      k_b_(k_b) {
  const std::size_t n = space_.size();
  std::sort(clients_.begin(), clients_.end());
  std::sort(red_.begin(), red_.end());
  std::sort(blue_.begin(), blue_.end());

  std::vector<int> seen(n, 0);
  roles_.assign(n, Role::kClient);
  const auto mark = [&](const std::vector<Location>& ids, Role role, const char* name) {
    for (const Location i : ids) {
      if (i >= n) {
        throw InputError(std::string(name) + " index " + std::to_string(i) +
                         " is out of range for a metric with n=" + std::to_string(n));
      }
      if (seen[i]++) {
        throw InputError("location " + std::to_string(i) +
                         " appears more than once across clients/red/blue");
      }
      roles_[i] = role;
    }
  };
  mark(clients_, Role::kClient, "client");
  mark(red_, Role::kRed, "red");
  mark(blue_, Role::kBlue, "blue");
  if (const auto it = std::find(seen.begin(), seen.end(), 0); it != seen.end()) {
    throw InputError("location " + std::to_string(it - seen.begin()) +
                     " is neither a client nor a facility");
  }
  if (k_r_ > red_.size()) {
    throw InputError("k_r=" + std::to_string(k_r_) + " exceeds the number of red facilities (" +
                     std::to_string(red_.size()) + ")");
  }
  if (k_b_ > blue_.size()) {
    throw InputError("k_b=" + std::to_string(k_b_) +
                     " exceeds the number of blue facilities (" +
                     std::to_string(blue_.size()) + ")");
  }
  if (k_r_ + k_b_ == 0) {
    throw InputError("k_r + k_b must be at least 1");
  }
}

template <DistanceValue D>
void Instance<D>::check_feasible(const Solution& sol) const {
  check_colour_set(roles_, sol.red, Role::kRed, k_r_, "R");
  check_colour_set(roles_, sol.blue, Role::kBlue, k_b_, "B");
}

template <DistanceValue D>
bool Instance<D>::is_feasible(const Solution& sol) const {
  try {
    check_feasible(sol);
    return true;
  } catch (const InfeasibleSolution&) {
    return false;
  }
}

template <DistanceValue D>
Assignment<D> evaluate(const Instance<D>& inst, const Solution& sol) {
  inst.check_feasible(sol);
  const std::vector<Location> open = sol.open();
  const auto clients = inst.clients();

  Assignment<D> out;
  out.facility.resize(clients.size());
  out.distance.resize(clients.size());
  for (std::size_t t = 0; t < clients.size(); ++t) {
    const auto row = inst.space().row(clients[t]);
    Location best = open.front();
    D best_d = row[best];
    for (const Location f : open) {
      if (row[f] < best_d) {
        best = f;
        best_d = row[f];
      }
    }
    out.facility[t] = best;
    out.distance[t] = best_d;
    out.total += best_d;
  }
  return out;
}

template <DistanceValue D>
D all_open_lower_bound(const Instance<D>& inst) {
  D total{0};
  for (const Location j : inst.clients()) {
    const auto row = inst.space().row(j);
    bool first = true;
    D best{0};
    for (const auto set : {inst.red(), inst.blue()}) {
      for (const Location f : set) {
        if (first || row[f] < best) best = row[f];
        first = false;
      }
    }
    total += best;
  }
  return total;
}

template <DistanceValue D>
DisjointPair<D> disjointify(const Instance<D>& inst, const Solution& local,
                            const Solution& global) {
  inst.check_feasible(local);
  inst.check_feasible(global);

  const std::vector<Location> s_open = local.open();
  const std::vector<Location> o_open = global.open();
  std::vector<Location> shared;
  std::set_intersection(s_open.begin(), s_open.end(), o_open.begin(), o_open.end(),
                        std::back_inserter(shared));
  if (shared.empty()) return {inst, local, global, {}};

  const Location n = static_cast<Location>(inst.size());
  std::vector<Location> clients(inst.clients().begin(), inst.clients().end());
  std::vector<Location> red(inst.red().begin(), inst.red().end());
  std::vector<Location> blue(inst.blue().begin(), inst.blue().end());
  std::vector<Location> copy_of(inst.size(), kNoLocation);
  for (std::size_t t = 0; t < shared.size(); ++t) {
    const Location copy = n + static_cast<Location>(t);
    copy_of[shared[t]] = copy;
    (inst.colour(shared[t]) == Colour::kRed ? red : blue).push_back(copy);
  }
  const auto relabel = [&](std::vector<Location> ids) {
    for (Location& i : ids) {
      if (copy_of[i] != kNoLocation) i = copy_of[i];
    }
    return ids;
  };

  Instance<D> dup(inst.space().with_duplicates(shared), std::move(clients), std::move(red),
                  std::move(blue), inst.k_r(), inst.k_b());
  Solution g = Solution::sorted(relabel(global.red), relabel(global.blue));
  return {std::move(dup), local, std::move(g), std::move(shared)};
}

template <DistanceValue D>
Solution random_solution(const Instance<D>& inst, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Location> red(inst.red().begin(), inst.red().end());
  std::vector<Location> blue(inst.blue().begin(), inst.blue().end());
  red = rng.sample(std::move(red), inst.k_r());
  blue = rng.sample(std::move(blue), inst.k_b());
  return Solution::sorted(std::move(red), std::move(blue));
}

namespace {

struct Layout {
  std::vector<Location> clients, red, blue;
};

Layout layout(const GeneratorParams& params) {
  if (params.k_r > params.n_red || params.k_b > params.n_blue) {
    throw InputError("budgets exceed facility counts: k_r=" + std::to_string(params.k_r) +
                     " of " + std::to_string(params.n_red) + ", k_b=" +
                     std::to_string(params.k_b) + " of " + std::to_string(params.n_blue));
  }
  if (params.k_r + params.k_b == 0) throw InputError("k_r + k_b must be at least 1");
  Layout out;
  Location next = 0;
  for (std::size_t t = 0; t < params.n_clients; ++t) out.clients.push_back(next++);
  for (std::size_t t = 0; t < params.n_red; ++t) out.red.push_back(next++);
  for (std::size_t t = 0; t < params.n_blue; ++t) out.blue.push_back(next++);
  return out;
}

}  // namespace

Instance<double> gen_euclidean(const GeneratorParams& params, double box_size) {
  if (!(box_size > 0.0)) throw InputError("box_size must be positive");
  Layout ids = layout(params);
  const std::size_t n = params.n_clients + params.n_red + params.n_blue;
  Rng rng(params.seed);
  std::vector<std::pair<double, double>> pts(n);
  for (auto& [x, y] : pts) {
    x = rng.unit() * box_size;
    y = rng.unit() * box_size;
  }
  std::vector<std::vector<double>> table(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double d = std::hypot(pts[a].first - pts[b].first, pts[a].second - pts[b].second);
      table[a][b] = table[b][a] = d;
    }
  }
  return Instance<double>(MetricSpace<double>::from_matrix(table), std::move(ids.clients),
                          std::move(ids.red), std::move(ids.blue), params.k_r, params.k_b);
}

Instance<std::int64_t> gen_grid(const GeneratorParams& params, std::int64_t grid) {
  if (grid < 1) throw InputError("grid must be at least 1");
  Layout ids = layout(params);
  const std::size_t n = params.n_clients + params.n_red + params.n_blue;
  Rng rng(params.seed);
  std::vector<std::pair<std::int64_t, std::int64_t>> pts(n);
  for (auto& [x, y] : pts) {
    x = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(grid)));
    y = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(grid)));
  }
  std::vector<std::vector<std::int64_t>> table(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      table[a][b] = table[b][a] =
          std::abs(pts[a].first - pts[b].first) + std::abs(pts[a].second - pts[b].second);
    }
  }
  return Instance<std::int64_t>(MetricSpace<std::int64_t>::from_matrix(table),
                                std::move(ids.clients), std::move(ids.red),
                                std::move(ids.blue), params.k_r, params.k_b);
}

template class Instance<std::int64_t>;
template class Instance<double>;

#define RBM_INSTANTIATE(D)                                                              \
  template Assignment<D> evaluate<D>(const Instance<D>&, const Solution&);             \
  template D all_open_lower_bound<D>(const Instance<D>&);                              \
  template DisjointPair<D> disjointify<D>(const Instance<D>&, const Solution&,         \
                                          const Solution&);                            \
  template Solution random_solution<D>(const Instance<D>&, std::uint64_t);

RBM_INSTANTIATE(std::int64_t)
RBM_INSTANTIATE(double)
#undef RBM_INSTANTIATE

}  // namespace rbm
