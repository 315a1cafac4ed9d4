#include "rbmedian/local_search.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "detail/delta.hpp"

namespace rbm {
namespace {

std::string join(const std::vector<Location>& ids) {
  std::ostringstream os;
  os << '{';
  for (std::size_t t = 0; t < ids.size(); ++t) os << (t ? "," : "") << ids[t];
  os << '}';
  return os.str();
}

std::vector<Location> minus(std::span<const Location> all, std::vector<Location> chosen) {
  std::sort(chosen.begin(), chosen.end());
  std::vector<Location> out;
  std::set_difference(all.begin(), all.end(), chosen.begin(), chosen.end(),
                      std::back_inserter(out));
  return out;
}

unsigned resolve_threads(bool parallel, unsigned requested) {
  if (!parallel) return 1;
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace

std::string describe(const SwapMove& move) {
  std::ostringstream os;
  os << "close R" << join(move.close_red) << " open R" << join(move.open_red) << " close B"
     << join(move.close_blue) << " open B" << join(move.open_blue);
  return os.str();
}

template <DistanceValue D>
void check_move(const Instance<D>& inst, const Solution& sol, const SwapMove& move) {
  const auto check = [&](const std::vector<Location>& close, const std::vector<Location>& open,
                         const std::vector<Location>& current, Role role, const char* name) {
    if (close.size() != open.size()) {
      throw InputError(std::string("invalid move: ") + name + " close/open sizes differ");
    }
    for (const Location f : close) {
      if (std::find(current.begin(), current.end(), f) == current.end()) {
        throw InputError("invalid move: closes " + std::to_string(f) +
                         ", which is not open");
      }
    }
    for (const Location f : open) {
      if (f >= inst.size() || inst.role(f) != role) {
        throw InputError("invalid move: opens " + std::to_string(f) + ", which is not a " +
                         name + " facility");
      }
      if (std::find(current.begin(), current.end(), f) != current.end()) {
        throw InputError("invalid move: opens " + std::to_string(f) +
                         ", which is already open");
      }
    }
    for (const auto* set : {&close, &open}) {
      for (std::size_t t = 1; t < set->size(); ++t) {
        if ((*set)[t - 1] >= (*set)[t]) {
          throw InputError(std::string("invalid move: ") + name +
                           " sets must be strictly increasing");
        }
      }
    }
  };
  check(move.close_red, move.open_red, sol.red, Role::kRed, "red");
  check(move.close_blue, move.open_blue, sol.blue, Role::kBlue, "blue");
}

Solution apply(const Solution& sol, const SwapMove& move) {
  std::vector<Location> red = minus(sol.red, move.close_red);
  std::vector<Location> blue = minus(sol.blue, move.close_blue);
  red.insert(red.end(), move.open_red.begin(), move.open_red.end());
  blue.insert(blue.end(), move.open_blue.begin(), move.open_blue.end());
  return Solution::sorted(std::move(red), std::move(blue));
}

std::uint64_t neighborhood_size(std::size_t n_red, std::size_t k_r, std::size_t n_blue,
                                std::size_t k_b, std::size_t p) {
  const auto side = [p](std::size_t total, std::size_t k) {
    std::uint64_t sum = 0;
    for (std::size_t a = 0; a <= p && a <= k; ++a) {
      sum = saturating_add(sum, saturating_mul(binomial(k, a), binomial(total - k, a)));
    }
    return sum;
  };
  const std::uint64_t prod = saturating_mul(side(n_red, k_r), side(n_blue, k_b));
  return prod == kSaturated ? kSaturated : prod - 1;
}

Neighborhood::Neighborhood(std::vector<Location> red_in, std::vector<Location> red_out,
                           std::vector<Location> blue_in, std::vector<Location> blue_out,
                           std::size_t p)
    : red_in_(std::move(red_in)),
      red_out_(std::move(red_out)),
      blue_in_(std::move(blue_in)),
      blue_out_(std::move(blue_out)) {
  const std::size_t max_a = std::min({p, red_in_.size(), red_out_.size()});
  const std::size_t max_b = std::min({p, blue_in_.size(), blue_out_.size()});
  for (std::size_t total = 1; total <= max_a + max_b; ++total) {
    for (std::size_t a = 0; a <= std::min(total, max_a); ++a) {
      if (total - a <= max_b) size_classes_.emplace_back(a, total - a);
    }
  }
}

template <DistanceValue D>
Neighborhood Neighborhood::of(const Instance<D>& inst, const Solution& sol, std::size_t p) {
  Solution s = Solution::sorted(sol.red, sol.blue);
  std::vector<Location> red_out = minus(inst.red(), s.red);
  std::vector<Location> blue_out = minus(inst.blue(), s.blue);
  return Neighborhood(std::move(s.red), std::move(red_out), std::move(s.blue),
                      std::move(blue_out), p);
}

std::uint64_t Neighborhood::size() const {
  std::uint64_t total = 0;
  for (const auto& [a, b] : size_classes_) {
    std::uint64_t c = saturating_mul(binomial(red_in_.size(), a), binomial(red_out_.size(), a));
    c = saturating_mul(c, binomial(blue_in_.size(), b));
    c = saturating_mul(c, binomial(blue_out_.size(), b));
    total = saturating_add(total, c);
  }
  return total;
}

Neighborhood::iterator::iterator(const Neighborhood* hood) : hood_(hood), done_(false) {
  if (hood_->size_classes_.empty()) {
    done_ = true;
    return;
  }
  start_size_class();
}

bool Neighborhood::iterator::start_size_class() {
  const auto [a, b] = hood_->size_classes_[size_class_];
  cursors_.clear();
  cursors_.emplace_back(hood_->red_in_.size(), a);
  cursors_.emplace_back(hood_->red_out_.size(), a);
  cursors_.emplace_back(hood_->blue_in_.size(), b);
  cursors_.emplace_back(hood_->blue_out_.size(), b);
  materialize();
  return true;
}

void Neighborhood::iterator::materialize() {
  const auto fill = [](std::vector<Location>& dst, const std::vector<Location>& src,
                       const CombinationCursor& cur) {
    dst.resize(cur.size());
    const auto idx = cur.indices();
    for (std::size_t t = 0; t < idx.size(); ++t) dst[t] = src[idx[t]];
  };
  fill(move_.close_red, hood_->red_in_, cursors_[0]);
  fill(move_.open_red, hood_->red_out_, cursors_[1]);
  fill(move_.close_blue, hood_->blue_in_, cursors_[2]);
  fill(move_.open_blue, hood_->blue_out_, cursors_[3]);
}

Neighborhood::iterator& Neighborhood::iterator::operator++() {
  if (done_) return *this;
  ++index_;
  for (std::size_t c = cursors_.size(); c > 0; --c) {
    if (cursors_[c - 1].next()) {
      materialize();
      return *this;
    }
    cursors_[c - 1].reset();
  }
  if (++size_class_ < hood_->size_classes_.size()) {
    start_size_class();
  } else {
    done_ = true;
  }
  return *this;
}

template <DistanceValue D>
D delta_cost(const Instance<D>& inst, const Solution& sol, const Assignment<D>& asg,
             const SwapMove& move) {
  check_move(inst, sol, move);
  if (asg.facility.size() != inst.clients().size()) {
    throw InputError("assignment does not match the instance's client count");
  }
  detail::DeltaEvaluator<D> eval(inst, sol, asg);
  return eval(move);
}

template <DistanceValue D>
bool is_improving(D current, D delta) {
  if constexpr (kExactDistance<D>) {
    return delta < 0;
  } else {
    return delta < -kFloatImprovementTolerance * std::max(1.0, std::abs(current));
  }
}

template <DistanceValue D>
bool accepts(D current, D delta, double epsilon, std::size_t delta_n) {
  if (!is_improving(current, delta)) return false;
  if (epsilon <= 0.0) return true;
  const long double factor =
      1.0L - static_cast<long double>(epsilon) / static_cast<long double>(delta_n);
  return static_cast<long double>(current + delta) <= factor * static_cast<long double>(current);
}

double iteration_bound(std::size_t delta_n, double epsilon, double cost0, double cost_final) {
  if (cost0 <= 0.0) return 0.0;
  if (cost_final <= 0.0 || epsilon <= 0.0) return std::numeric_limits<double>::infinity();
  return std::ceil((static_cast<double>(delta_n) / epsilon) * std::log(cost0 / cost_final));
}

template <DistanceValue D>
ScanResult<D> scan_neighborhood(const Instance<D>& inst, const Solution& sol,
                                const Assignment<D>& asg, std::size_t p, ScanMode mode,
                                double epsilon, unsigned threads) {
  const Neighborhood hood = Neighborhood::of(inst, sol, p);
  const detail::DeltaEvaluator<D> eval(inst, sol, asg);
  const D current = asg.total;
  const std::size_t delta_n = inst.size();
  threads = std::max(1u, threads);

  std::atomic<std::uint64_t> first_found{std::numeric_limits<std::uint64_t>::max()};
  std::vector<ScanResult<D>> partial(threads);

  const auto worker = [&](unsigned tid) {
    ScanResult<D>& out = partial[tid];
    for (auto it = hood.begin(); it != hood.end(); ++it) {
      const std::uint64_t idx = it.index();
      if (idx % threads != tid) continue;
      if (mode == ScanMode::kFirstAccepted && idx > first_found.load(std::memory_order_relaxed)) {
        break;
      }
      const D d = eval(*it);
      ++out.scanned;
      if (mode == ScanMode::kBest) {
        if (!out.move || d < out.delta) {
          out.move = *it;
          out.delta = d;
          out.index = idx;
        }
      } else if (accepts(current, d, epsilon, delta_n)) {
        out.move = *it;
        out.delta = d;
        out.index = idx;
        std::uint64_t seen = first_found.load();
        while (idx < seen && !first_found.compare_exchange_weak(seen, idx)) {
        }
        break;
      }
    }
  };

  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
  }

  ScanResult<D> best;
  for (ScanResult<D>& part : partial) {
    best.scanned += part.scanned;
    if (!part.move) continue;
    const bool better = !best.move ||
                        (mode == ScanMode::kBest &&
                         (part.delta < best.delta ||
                          (part.delta == best.delta && part.index < best.index))) ||
                        (mode == ScanMode::kFirstAccepted && part.index < best.index);
    if (better) {
      best.move = std::move(part.move);
      best.delta = part.delta;
      best.index = part.index;
    }
  }
  return best;
}

template <DistanceValue D>
SearchResult<D> run(const Instance<D>& inst, const SearchConfig& config,
                    const std::optional<Solution>& initial) {
  if (config.p < 1) throw InputError("swap radius p must be at least 1");
  if (!(config.epsilon >= 0.0 && config.epsilon < 1.0)) {
    throw InputError("epsilon must lie in [0, 1)");
  }
  const unsigned threads = resolve_threads(config.parallel, config.threads);
  const ScanMode mode = config.rule == SearchRule::kBestImprovement ? ScanMode::kBest
                                                                    : ScanMode::kFirstAccepted;

  SearchResult<D> result;
  result.solution = initial ? Solution::sorted(initial->red, initial->blue)
                            : random_solution(inst, config.seed);
  result.assignment = evaluate(inst, result.solution);
  result.trace.push_back(result.assignment.total);

  for (;;) {
    const ScanResult<D> scan = scan_neighborhood(inst, result.solution, result.assignment,
                                                 config.p, mode, config.epsilon, threads);
    if (!scan.move ||
        !accepts(result.assignment.total, scan.delta, config.epsilon, inst.size())) {
      result.termination = Termination::kLocalOptimum;
      break;
    }
    if (result.iterations >= config.max_iters) {
      result.termination = Termination::kIterationCap;
      break;
    }
    result.solution = apply(result.solution, *scan.move);
    result.assignment = evaluate(inst, result.solution);
    result.trace.push_back(result.assignment.total);
    ++result.iterations;
  }
  return result;
}

#define RBM_INSTANTIATE(D)                                                                  \
  template void check_move<D>(const Instance<D>&, const Solution&, const SwapMove&);        \
  template Neighborhood Neighborhood::of<D>(const Instance<D>&, const Solution&,            \
                                            std::size_t);                                   \
  template D delta_cost<D>(const Instance<D>&, const Solution&, const Assignment<D>&,       \
                           const SwapMove&);                                                \
  template bool is_improving<D>(D, D);                                                      \
  template bool accepts<D>(D, D, double, std::size_t);                                      \
  template ScanResult<D> scan_neighborhood<D>(const Instance<D>&, const Solution&,          \
                                              const Assignment<D>&, std::size_t, ScanMode,  \
                                              double, unsigned);                            \
  template SearchResult<D> run<D>(const Instance<D>&, const SearchConfig&,                  \
                                  const std::optional<Solution>&);

RBM_INSTANTIATE(std::int64_t)
RBM_INSTANTIATE(double)
#undef RBM_INSTANTIATE

}  // namespace rbm
