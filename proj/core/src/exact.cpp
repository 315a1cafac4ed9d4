#include "rbmedian/exact.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <thread>

namespace rbm {
namespace {

template <DistanceValue D>
constexpr D kUnreached = std::numeric_limits<D>::has_infinity ? std::numeric_limits<D>::infinity()
                                                              : std::numeric_limits<D>::max();

// Depth-first enumeration of (red combination, blue combination) in
// lexicographic order, keeping per-depth nearest-distance vectors so each
// node costs O(|C|).
template <DistanceValue D>
class SubsetSearch {
 public:
  explicit SubsetSearch(const Instance<D>& inst)
      : inst_(inst),
        m_(inst.clients().size()),
        k_r_(inst.k_r()),
        k_b_(inst.k_b()),
        levels_(inst.k_r() + inst.k_b() + 1, std::vector<D>(inst.clients().size(), kUnreached<D>)),
        chosen_(inst.k_r() + inst.k_b()) {
    const auto column = [&](std::span<const Location> facilities) {
      std::vector<std::vector<D>> out;
      for (const Location f : facilities) {
        auto& col = out.emplace_back(m_);
        const auto row = inst.space().row(f);
        for (std::size_t t = 0; t < m_; ++t) col[t] = row[inst.clients()[t]];
      }
      return out;
    };
    red_cols_ = column(inst.red());
    blue_cols_ = column(inst.blue());
  }

  // Runs the subtree whose first red choices are `red_prefix` and, if the
  // red prefix is complete and k_b > 0, whose first blue choice is `blue0`.
  OptResult<D> run(std::span<const std::size_t> red_prefix, std::optional<std::size_t> blue0) {
    best_ = OptResult<D>{};
    have_best_ = false;
    std::size_t depth = 0;
    std::size_t next_red = 0;
    for (const std::size_t r : red_prefix) {
      push(depth++, red_cols_[r]);
      chosen_[depth - 1] = r;
      next_red = r + 1;
    }
    if (depth < k_r_) {
      red(depth, next_red);
    } else if (blue0) {
      push(depth, blue_cols_[*blue0]);
      chosen_[depth] = *blue0;
      blue(depth + 1, *blue0 + 1);
    } else {
      blue(depth, 0);
    }
    return best_;
  }

 private:
  void push(std::size_t depth, const std::vector<D>& col) {
    const auto& parent = levels_[depth];
    auto& child = levels_[depth + 1];
    for (std::size_t t = 0; t < m_; ++t) child[t] = std::min(parent[t], col[t]);
  }

  void red(std::size_t depth, std::size_t start) {
    if (depth == k_r_) {
      blue(depth, 0);
      return;
    }
    const std::size_t remaining = k_r_ - depth;
    for (std::size_t r = start; r + remaining <= red_cols_.size(); ++r) {
      chosen_[depth] = r;
      push(depth, red_cols_[r]);
      red(depth + 1, r + 1);
    }
  }

  void blue(std::size_t depth, std::size_t start) {
    if (depth == k_r_ + k_b_) {
      leaf();
      return;
    }
    const std::size_t remaining = k_r_ + k_b_ - depth;
    for (std::size_t b = start; b + remaining <= blue_cols_.size(); ++b) {
      chosen_[depth] = b;
      push(depth, blue_cols_[b]);
      blue(depth + 1, b + 1);
    }
  }

  void leaf() {
    ++best_.examined;
    const auto& mins = levels_[k_r_ + k_b_];
    D total{0};
    for (const D v : mins) total += v;
    if (!have_best_ || total < best_.cost) {
      have_best_ = true;
      best_.cost = total;
      best_.solution.red.resize(k_r_);
      best_.solution.blue.resize(k_b_);
      for (std::size_t i = 0; i < k_r_; ++i) best_.solution.red[i] = inst_.red()[chosen_[i]];
      for (std::size_t i = 0; i < k_b_; ++i) {
        best_.solution.blue[i] = inst_.blue()[chosen_[k_r_ + i]];
      }
    }
  }

  const Instance<D>& inst_;
  std::size_t m_;
  std::size_t k_r_, k_b_;
  std::vector<std::vector<D>> red_cols_, blue_cols_;
  std::vector<std::vector<D>> levels_;
  std::vector<std::size_t> chosen_;
  OptResult<D> best_;
  bool have_best_ = false;
};

struct Task {
  std::vector<std::size_t> red;
  std::optional<std::size_t> blue0;
};

// Every complete red combination, each paired with every admissible first
// blue choice, in lexicographic order.
template <DistanceValue D>
std::vector<Task> make_tasks(const Instance<D>& inst) {
  std::vector<Task> tasks;
  const std::size_t nb = inst.blue().size();
  for (CombinationCursor cur(inst.red().size(), inst.k_r()); cur.valid(); cur.next()) {
    std::vector<std::size_t> red(cur.indices().begin(), cur.indices().end());
    if (inst.k_b() == 0) {
      tasks.push_back({std::move(red), std::nullopt});
      continue;
    }
    for (std::size_t b = 0; b + inst.k_b() <= nb; ++b) tasks.push_back({red, b});
  }
  return tasks;
}

}  // namespace

template <DistanceValue D>
OptResult<D> brute_force_opt(const Instance<D>& inst, std::uint64_t cap, unsigned threads) {
  const std::uint64_t space = solution_space_size(inst);
  if (space > cap) {
    throw CapExceeded("brute force needs " + std::to_string(space) +
                          " subsets, above the cap of " + std::to_string(cap),
                      space, cap);
  }
  const std::vector<Task> tasks = make_tasks(inst);
  threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::max<std::size_t>(1, tasks.size())));
  std::vector<OptResult<D>> results(tasks.size());
  std::atomic<std::size_t> next{0};

  const auto worker = [&] {
    SubsetSearch<D> search(inst);
    for (std::size_t t = next++; t < tasks.size(); t = next++) {
      results[t] = search.run(tasks[t].red, tasks[t].blue0);
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  OptResult<D> best;
  bool have = false;
  std::uint64_t examined = 0;
  for (const OptResult<D>& r : results) {
    examined += r.examined;
    if (r.examined == 0) continue;
    if (!have || r.cost < best.cost) {
      best = r;
      have = true;
    }
  }
  if (!have) throw InternalError("brute force examined no feasible solution");
  best.examined = examined;
  return best;
}

template <DistanceValue D>
LocalOptVerdict<D> is_local_opt(const Instance<D>& inst, const Solution& sol, std::size_t p,
                                std::uint64_t cap, unsigned threads) {
  if (p < 1) throw InputError("swap radius p must be at least 1");
  const Assignment<D> asg = evaluate(inst, sol);
  const std::uint64_t size = neighborhood_size(inst, p);
  if (size > cap) {
    throw CapExceeded("neighbourhood has " + std::to_string(size) +
                          " moves, above the cap of " + std::to_string(cap),
                      size, cap);
  }
  ScanResult<D> scan = scan_neighborhood(inst, Solution::sorted(sol.red, sol.blue), asg, p,
                                         ScanMode::kFirstAccepted, 0.0, threads);
  LocalOptVerdict<D> verdict;
  verdict.scanned = scan.scanned;
  if (scan.move) {
    verdict.locally_optimal = false;
    verdict.witness = std::move(scan.move);
    verdict.witness_delta = scan.delta;
    verdict.witness_index = scan.index;
  }
  return verdict;
}

template <DistanceValue D>
std::optional<CertifiedOpt<D>> certified_opt(const Instance<D>& inst,
                                             std::span<const Solution> candidates,
                                             std::uint64_t cap, unsigned threads) {
  if (solution_space_size(inst) <= cap) {
    OptResult<D> opt = brute_force_opt(inst, cap, threads);
    return CertifiedOpt<D>{opt.cost, OptSource::kBruteForce, std::move(opt.solution)};
  }
  const D bound = all_open_lower_bound(inst);
  for (const Solution& s : candidates) {
    if (!inst.is_feasible(s)) continue;
    if (cost(inst, s) == bound) return CertifiedOpt<D>{bound, OptSource::kLowerBoundCertificate, s};
  }
  return std::nullopt;
}

#define RBM_INSTANTIATE(D)                                                                   \
  template OptResult<D> brute_force_opt<D>(const Instance<D>&, std::uint64_t, unsigned);     \
  template LocalOptVerdict<D> is_local_opt<D>(const Instance<D>&, const Solution&,           \
                                              std::size_t, std::uint64_t, unsigned);         \
  template std::optional<CertifiedOpt<D>> certified_opt<D>(                                  \
      const Instance<D>&, std::span<const Solution>, std::uint64_t, unsigned);

RBM_INSTANTIATE(std::int64_t)
RBM_INSTANTIATE(double)
#undef RBM_INSTANTIATE

}  // namespace rbm
