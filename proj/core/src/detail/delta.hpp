#pragma once

#include <algorithm>
#include <vector>

#include "rbmedian/instance.hpp"
#include "rbmedian/local_search.hpp"

namespace rbm::detail {

// Incremental swap evaluation against a fixed (solution, assignment) pair.
// A client whose facility stays open can only improve via the opened
// facilities; a client whose facility closes is rescanned over the new
// open set.
template <DistanceValue D>
class DeltaEvaluator {
 public:
  DeltaEvaluator(const Instance<D>& inst, const Solution& sol, const Assignment<D>& asg)
      : inst_(inst), open_(sol.open()), asg_(asg) {}

  D operator()(const SwapMove& move) const {
    if (move.empty()) return D{0};
    const auto clients = inst_.clients();
    std::vector<Location> after;
    D delta{0};
    for (std::size_t t = 0; t < clients.size(); ++t) {
      const auto row = inst_.space().row(clients[t]);
      const Location f = asg_.facility[t];
      const D c = asg_.distance[t];
      D best = c;
      if (!closes(move, f)) {
        for (const Location o : move.open_red) best = std::min(best, row[o]);
        for (const Location o : move.open_blue) best = std::min(best, row[o]);
        delta += best - c;
        continue;
      }
      if (after.empty()) after = open_after(move);
      best = row[after.front()];
      for (const Location o : after) best = std::min(best, row[o]);
      delta += best - c;
    }
    return delta;
  }

 private:
  static bool closes(const SwapMove& move, Location f) {
    return std::find(move.close_red.begin(), move.close_red.end(), f) != move.close_red.end() ||
           std::find(move.close_blue.begin(), move.close_blue.end(), f) != move.close_blue.end();
  }

  std::vector<Location> open_after(const SwapMove& move) const {
    std::vector<Location> out;
    out.reserve(open_.size());
    for (const Location f : open_) {
      if (!closes(move, f)) out.push_back(f);
    }
    out.insert(out.end(), move.open_red.begin(), move.open_red.end());
    out.insert(out.end(), move.open_blue.begin(), move.open_blue.end());
    return out;
  }

  const Instance<D>& inst_;
  std::vector<Location> open_;
  const Assignment<D>& asg_;
};

}  // namespace rbm::detail
