#include "rbmedian/gap.hpp"

#include <algorithm>

namespace rbm {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

void GapParams::validate() const {
  if (p < 1) throw InputError("gap construction needs p >= 1 (got p=" + std::to_string(p) + ")");
  if (ell < 2 * p) {
    throw InputError("gap construction needs ell >= 2p (got p=" + std::to_string(p) +
                     ", ell=" + std::to_string(ell) + ")");
  }
}

std::int64_t GapParams::local_cost() const {
  return alpha() * (p + 1) + beta() * p * ell + p * p * (ell + 1);
}

std::int64_t GapParams::global_cost() const { return p * p * (ell + 1); }

Rational GapParams::ratio_lower_bound() const {
  return Rational(5) + Rational(2, p) - Rational(10 * p, ell + 1);
}

GapInstance build_gap(const GapParams& params) {
  params.validate();
  const std::int64_t p = params.p;
  const std::int64_t ell = params.ell;
  const std::int64_t alpha = params.alpha();
  const std::int64_t beta = params.beta();

  GapLayout lay;
  std::vector<Location> clients, red, blue;
  std::vector<Edge<std::int64_t>> edges;
  Location next = 0;
  const auto add = [&](std::vector<Location>& set) {
    set.push_back(next);
    return next++;
  };

  lay.left_local = add(red);
  for (std::int64_t t = 0; t <= p; ++t) {
    const Location c = add(clients);
    const Location g = add(red);
    lay.left_clients.push_back(c);
    lay.left_global.push_back(g);
    edges.push_back({lay.left_local, c, alpha});
    edges.push_back({c, g, 0});
  }

  for (std::int64_t s = 0; s < p; ++s) {
    const Location r = add(red);
    lay.middle_local.push_back(r);
    auto& cs = lay.middle_clients.emplace_back();
    auto& gs = lay.middle_global.emplace_back();
    for (std::int64_t t = 0; t < ell; ++t) {
      const Location c = add(clients);
      const Location g = add(blue);
      cs.push_back(c);
      gs.push_back(g);
      edges.push_back({r, c, beta});
      edges.push_back({c, g, 0});
    }
  }

  for (std::int64_t t = 0; t < p; ++t) lay.right_global.push_back(add(blue));
  for (std::int64_t b = 0; b < p * (ell + 1); ++b) {
    const Location f = add(blue);
    lay.right_local.push_back(f);
    auto& cs = lay.right_clients.emplace_back();
    for (std::int64_t t = 0; t < p; ++t) {
      const Location c = add(clients);
      cs.push_back(c);
      edges.push_back({f, c, 1});
      edges.push_back({c, lay.right_global[static_cast<std::size_t>(t)], 1});
    }
  }

  GraphSpec<std::int64_t> graph{next, std::move(edges), SentinelPolicy::kSumPlusOne};
  Instance<std::int64_t> inst(MetricSpace<std::int64_t>::from_graph(graph), std::move(clients),
                              std::move(red), std::move(blue),
                              static_cast<std::size_t>(params.k_r()),
                              static_cast<std::size_t>(params.k_b()));

  std::vector<Location> local_red{lay.left_local};
  local_red.insert(local_red.end(), lay.middle_local.begin(), lay.middle_local.end());
  std::vector<Location> global_blue;
  for (const auto& gs : lay.middle_global) global_blue.insert(global_blue.end(), gs.begin(), gs.end());
  global_blue.insert(global_blue.end(), lay.right_global.begin(), lay.right_global.end());

  GapInstance gap{params,
                  std::move(graph),
                  std::move(inst),
                  std::move(lay),
                  {},
                  {},
                  params.local_cost(),
                  params.global_cost(),
                  params.ratio(),
                  params.ratio_lower_bound()};
  gap.local = Solution::sorted(std::move(local_red), gap.layout.right_local);
  gap.global = Solution::sorted(gap.layout.left_global, std::move(global_blue));
  return gap;
}

std::string gap_case(const GapInstance& gap, const SwapMove& move) {
  const std::size_t r = move.red_size();
  if (r == 0) return "R = 0";
  const bool left_closed = std::find(move.close_red.begin(), move.close_red.end(),
                                     gap.layout.left_local) != move.close_red.end();
  if (!left_closed) return "R >= 1, left local red kept";
  if (r == 1) return "R = 1, left local red swapped out";
  return "R >= 2, left local red swapped out";
}

bool GapReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const GapCheck& c) { return c.passed; });
}

GapReport verify_gap(const GapInstance& gap, std::uint64_t exhaustive_cap, unsigned threads) {
  const auto& inst = gap.instance;
  GapReport report;
  report.params = gap.params;

  report.local_cost = cost(inst, gap.local);
  report.global_cost = cost(inst, gap.global);
  report.checks.push_back({"local-cost", report.local_cost == gap.expected_local_cost,
                           "evaluated " + std::to_string(report.local_cost) + ", expected " +
                               std::to_string(gap.expected_local_cost)});
  report.checks.push_back({"global-cost", report.global_cost == gap.expected_global_cost,
                           "evaluated " + std::to_string(report.global_cost) + ", expected " +
                               std::to_string(gap.expected_global_cost)});

  const Solution candidates[] = {gap.global};
  const auto opt = certified_opt<std::int64_t>(inst, candidates, exhaustive_cap, threads);
  if (opt) {
    report.opt_cost = opt->cost;
    report.opt_source = opt->source;
    report.checks.push_back({"optimum", opt->cost == gap.expected_global_cost,
                             std::string(to_string(opt->source)) + " optimum " +
                                 std::to_string(opt->cost) + ", expected " +
                                 std::to_string(gap.expected_global_cost)});
  } else {
    report.checks.push_back({"optimum", false,
                             "optimum could not be certified: " +
                                 std::to_string(solution_space_size(inst)) +
                                 " subsets exceed the cap and no candidate meets the lower bound"});
  }

  const auto verdict = is_local_opt(inst, gap.local, static_cast<std::size_t>(gap.params.p),
                                    exhaustive_cap, threads);
  report.moves_scanned = verdict.scanned;
  if (verdict.locally_optimal) {
    report.checks.push_back({"local-optimality", true,
                             std::to_string(verdict.scanned) +
                                 " swaps scanned, none strictly improving"});
  } else {
    report.witness = verdict.witness;
    report.witness_delta = verdict.witness_delta;
    report.witness_case = gap_case(gap, *verdict.witness);
    report.checks.push_back({"local-optimality", false,
                             "improving swap in case '" + report.witness_case +
                                 "': " + describe(*verdict.witness) + " (delta " +
                                 std::to_string(verdict.witness_delta) + ")"});
  }

  const Rational ratio(report.local_cost, std::max<std::int64_t>(1, report.global_cost));
  report.checks.push_back({"ratio-bound", ratio >= gap.ratio_lower_bound,
                           "ratio " + to_string(ratio) + " vs bound " +
                               to_string(gap.ratio_lower_bound)});
  return report;
}

}  // namespace rbm
