#include "rbmedian/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iterator>
#include <optional>

namespace rbm {
namespace {

bool is_blue(std::span<const Role> roles, Location i) { return roles[i] == Role::kBlue; }
bool is_red(std::span<const Role> roles, Location i) { return roles[i] == Role::kRed; }

Colour colour_of(std::span<const Role> roles, Location i) {
  return is_red(roles, i) ? Colour::kRed : Colour::kBlue;
}

Colour other(Colour c) { return c == Colour::kRed ? Colour::kBlue : Colour::kRed; }

std::size_t count_colour(std::span<const Location> ids, std::span<const Role> roles, Colour c) {
  return static_cast<std::size_t>(std::count_if(
      ids.begin(), ids.end(), [&](Location i) { return colour_of(roles, i) == c; }));
}

// Takes the `count` lowest entries of an ascending pool.
std::vector<Location> take(std::deque<Location>& pool, std::size_t count) {
  std::vector<Location> out(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
  pool.erase(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
  return out;
}

template <DistanceValue D>
bool negative(D slack, D scale) {
  if constexpr (kExactDistance<D>) {
    return slack < 0;
  } else {
    return slack < -1e-9 * std::max(1.0, std::abs(scale));
  }
}

}  // namespace

const char* to_string(FacilityClass c) {
  switch (c) {
    case FacilityClass::kVeryGood: return "very-good";
    case FacilityClass::kGood: return "good";
    case FacilityClass::kBad: return "bad";
  }
  return "?";
}

const char* to_string(GroupClass c) {
  switch (c) {
    case GroupClass::kBalanced: return "balanced";
    case GroupClass::kGood: return "good";
    case GroupClass::kBad: return "bad";
  }
  return "?";
}

template <DistanceValue D>
PhiMap build_phi(const Instance<D>& inst, const Solution& local, const Solution& global) {
  inst.check_feasible(local);
  inst.check_feasible(global);
  PhiMap out;
  out.local = local.open();
  out.global = global.open();
  std::vector<Location> shared;
  std::set_intersection(out.local.begin(), out.local.end(), out.global.begin(), out.global.end(),
                        std::back_inserter(shared));
  if (!shared.empty()) {
    throw InputError("local and global solutions share facility " + std::to_string(shared[0]) +
                     "; duplicate shared facilities first (disjointify)");
  }

  const std::size_t n = inst.size();
  out.phi.assign(n, kNoLocation);
  out.preimage.assign(n, {});
  out.cent.assign(n, kNoLocation);
  out.in_local.assign(n, 0);
  out.in_global.assign(n, 0);
  for (const Location i : out.local) out.in_local[i] = 1;
  for (const Location i : out.global) out.in_global[i] = 1;

  for (const Location o : out.global) {
    Location best = out.local.front();
    for (const Location s : out.local) {
      if (inst.distance(o, s) < inst.distance(o, best)) best = s;
    }
    out.phi[o] = best;
    out.preimage[best].push_back(o);
  }
  for (const Location s : out.local) {
    const auto& pre = out.preimage[s];
    if (pre.empty()) continue;
    Location best = pre.front();
    for (const Location o : pre) {
      if (inst.distance(s, o) < inst.distance(s, best)) best = o;
    }
    out.cent[s] = best;
  }
  return out;
}

std::vector<FacilityClass> classify(const PhiMap& phi, std::span<const Role> roles) {
  std::vector<FacilityClass> out(phi.phi.size(), FacilityClass::kVeryGood);
  for (const Location i : phi.local) {
    const auto& pre = phi.preimage[i];
    if (pre.empty()) continue;
    const bool same = std::any_of(pre.begin(), pre.end(),
                                  [&](Location o) { return roles[o] == roles[i]; });
    out[i] = same ? FacilityClass::kBad : FacilityClass::kGood;
  }
  return out;
}

GroupClass group_class(const Group& g, const std::vector<FacilityClass>& classes,
                       std::span<const Role> roles) {
  if (count_colour(g.local_members, roles, Colour::kRed) ==
          count_colour(g.global_members, roles, Colour::kRed) &&
      count_colour(g.local_members, roles, Colour::kBlue) ==
          count_colour(g.global_members, roles, Colour::kBlue)) {
    return GroupClass::kBalanced;
  }
  const Colour rep = colour_of(roles, g.representative);
  const bool others_opposite =
      std::all_of(g.local_members.begin(), g.local_members.end(), [&](Location i) {
        return i == g.representative || colour_of(roles, i) != rep;
      });
  if (classes[g.representative] == FacilityClass::kGood && others_opposite) {
    return GroupClass::kGood;
  }
  return GroupClass::kBad;
}

std::vector<Group> make_groups(const PhiMap& phi, const std::vector<FacilityClass>& classes,
                               std::span<const Role> roles) {
  std::deque<Location> pool_red, pool_blue;  // remaining very-good facilities, ascending
  for (const Location i : phi.local) {
    if (phi.deg(i) == 0) (is_red(roles, i) ? pool_red : pool_blue).push_back(i);
  }
  const auto pool = [&](Colour c) -> std::deque<Location>& {
    return c == Colour::kRed ? pool_red : pool_blue;
  };

  std::vector<Group> groups;
  for (const Location rep : phi.local) {
    const std::size_t deg = phi.deg(rep);
    if (deg == 0) continue;
    const auto& pre = phi.preimage[rep];
    const Colour c = colour_of(roles, rep);
    const Colour opp = other(c);
    // Padding needed per colour for a balanced group.
    const std::ptrdiff_t need_same = static_cast<std::ptrdiff_t>(count_colour(pre, roles, c)) - 1;
    const std::size_t need_opp = count_colour(pre, roles, opp);

    Group g;
    g.representative = rep;
    g.global_members = pre;
    std::vector<Location> pad;
    GroupClass intended;
    if (need_same >= 0 && static_cast<std::size_t>(need_same) <= pool(c).size() &&
        need_opp <= pool(opp).size()) {
      pad = take(pool(c), static_cast<std::size_t>(need_same));
      auto more = take(pool(opp), need_opp);
      pad.insert(pad.end(), more.begin(), more.end());
      intended = GroupClass::kBalanced;
    } else if (classes[rep] == FacilityClass::kGood && deg - 1 <= pool(opp).size()) {
      pad = take(pool(opp), deg - 1);
      intended = GroupClass::kGood;
    } else {
      // Exhaust the deficient colour, then fill from the other one.
      Colour deficient;
      if (classes[rep] == FacilityClass::kGood) {
        deficient = opp;
      } else {
        deficient = need_opp > pool(opp).size() ? opp : c;
      }
      pad = take(pool(deficient), pool(deficient).size());
      if (pad.size() > deg - 1) {
        throw InternalError("group construction: deficient colour has too many very-good "
                            "facilities for representative " + std::to_string(rep));
      }
      const std::size_t rest = deg - 1 - pad.size();
      if (rest > pool(other(deficient)).size()) {
        throw InternalError("group construction: not enough very-good facilities to pad "
                            "representative " + std::to_string(rep));
      }
      auto more = take(pool(other(deficient)), rest);
      pad.insert(pad.end(), more.begin(), more.end());
      intended = GroupClass::kBad;
      if (!pool_red.empty() && !pool_blue.empty()) {
        throw InternalError("group construction: after a bad group both very-good pools "
                            "are non-empty");
      }
    }
    g.local_members = pad;
    g.local_members.push_back(rep);
    std::sort(g.local_members.begin(), g.local_members.end());
    g.kind = group_class(g, classes, roles);
    if (g.kind != intended) {
      throw InternalError(std::string("group construction: representative ") +
                          std::to_string(rep) + " produced a " + to_string(g.kind) +
                          " group where a " + to_string(intended) + " one was built");
    }
    groups.push_back(std::move(g));
  }
  if (!pool_red.empty() || !pool_blue.empty()) {
    throw InternalError("group construction: very-good facilities left over");
  }
  return groups;
}

int blue_deficiency(std::span<const Location> members, const PhiMap& phi,
                    std::span<const Role> roles) {
  int out = 0;
  for (const Location i : members) {
    if (!is_blue(roles, i)) continue;
    if (phi.in_global[i]) ++out;
    if (phi.in_local[i]) --out;
  }
  return out;
}

int blue_deficiency(const Group& g, std::span<const Role> roles) {
  return static_cast<int>(count_colour(g.global_members, roles, Colour::kBlue)) -
         static_cast<int>(count_colour(g.local_members, roles, Colour::kBlue));
}

std::vector<Block> make_blocks(const std::vector<Group>& groups, std::span<const Role> roles) {
  std::vector<Block> blocks;
  const auto emit = [&](std::vector<std::size_t> members, Location leader) {
    Block b;
    b.groups = std::move(members);
    b.leader = leader;
    for (const std::size_t gi : b.groups) {
      const Group& g = groups[gi];
      b.local_members.insert(b.local_members.end(), g.local_members.begin(),
                             g.local_members.end());
      b.global_members.insert(b.global_members.end(), g.global_members.begin(),
                              g.global_members.end());
    }
    std::sort(b.local_members.begin(), b.local_members.end());
    std::sort(b.global_members.begin(), b.global_members.end());
    blocks.push_back(std::move(b));
  };

  std::deque<std::size_t> good_red, good_blue;  // by representative colour, ascending
  std::vector<std::size_t> bad;
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    const Group& g = groups[gi];
    switch (g.kind) {
      case GroupClass::kBalanced:
        emit({gi}, g.representative);
        break;
      case GroupClass::kGood:
        (is_red(roles, g.representative) ? good_red : good_blue).push_back(gi);
        break;
      case GroupClass::kBad:
        bad.push_back(gi);
        break;
    }
  }

  while (!good_red.empty() && !good_blue.empty()) {
    const std::size_t a = good_red.front();
    const std::size_t b = good_blue.front();
    good_red.pop_front();
    good_blue.pop_front();
    emit({std::min(a, b), std::max(a, b)},
         std::min(groups[a].representative, groups[b].representative));
  }

  for (const std::size_t gi : bad) {
    const int def = blue_deficiency(groups[gi], roles);
    if (def == 0) {
      throw InternalError("block construction: bad group with representative " +
                          std::to_string(groups[gi].representative) + " has zero deficiency");
    }
    // A positive blue deficiency is cancelled by blue-representative good
    // groups (deficiency −1 each), a negative one by red-representative ones.
    auto& source = def > 0 ? good_blue : good_red;
    const std::size_t need = static_cast<std::size_t>(std::abs(def));
    if (source.size() < need) {
      throw InternalError("block construction: bad group with representative " +
                          std::to_string(groups[gi].representative) + " needs " +
                          std::to_string(need) + " good groups, only " +
                          std::to_string(source.size()) + " remain");
    }
    std::vector<std::size_t> members{gi};
    for (std::size_t t = 0; t < need; ++t) {
      members.push_back(source.front());
      source.pop_front();
    }
    emit(std::move(members), groups[gi].representative);
  }

  if (!good_red.empty() || !good_blue.empty()) {
    throw InternalError("block construction: " + std::to_string(good_red.size() + good_blue.size()) +
                        " good groups left over");
  }
  return blocks;
}

namespace {

template <class Unit, class LocalOf, class GlobalOf>
void check_partition(const std::vector<Unit>& units, const PhiMap& phi, LocalOf local_of,
                     GlobalOf global_of, std::vector<Violation>& out) {
  std::vector<int> seen(phi.phi.size(), 0);
  std::vector<std::size_t> owner(phi.phi.size(), 0);
  for (std::size_t u = 0; u < units.size(); ++u) {
    for (const auto* members : {&local_of(units[u]), &global_of(units[u])}) {
      for (const Location i : *members) {
        if (i >= seen.size() || (!phi.in_local[i] && !phi.in_global[i])) {
          out.push_back({u, "partition", i, "member is not in S or O"});
          continue;
        }
        if (seen[i]++) {
          out.push_back({u, "partition", i,
                         "also in unit " + std::to_string(owner[i])});
        }
        owner[i] = u;
      }
    }
  }
  for (const auto* set : {&phi.local, &phi.global}) {
    for (const Location i : *set) {
      if (!seen[i]) out.push_back({units.size(), "partition", i, "not covered"});
    }
  }
}

}  // namespace

BlockReport check_block_properties(const std::vector<Block>& blocks, const PhiMap& phi,
                                   std::span<const Role> roles) {
  BlockReport report;
  auto& out = report.violations;
  check_partition(
      blocks, phi, [](const Block& b) -> const auto& { return b.local_members; },
      [](const Block& b) -> const auto& { return b.global_members; }, out);
  const std::vector<FacilityClass> classes = classify(phi, roles);

  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    const Block& b = blocks[bi];
    const auto contains = [](const std::vector<Location>& v, Location i) {
      return std::binary_search(v.begin(), v.end(), i);
    };
    for (const Colour c : {Colour::kRed, Colour::kBlue}) {
      const std::size_t s = count_colour(b.local_members, roles, c);
      const std::size_t o = count_colour(b.global_members, roles, c);
      if (s != o) {
        out.push_back({bi, "colour-balance", b.leader,
                       std::string(to_string(c)) + ": " + std::to_string(s) + " local vs " +
                           std::to_string(o) + " global"});
      }
    }
    for (const Location i : b.local_members) {
      for (const Location o : phi.preimage[i]) {
        if (!contains(b.global_members, o)) {
          out.push_back({bi, "phi-closure", o,
                         "preimage of " + std::to_string(i) + " lies outside the block"});
        }
      }
    }
    for (const Location o : b.global_members) {
      if (!contains(b.local_members, phi.phi[o])) {
        out.push_back({bi, "phi-closure", o,
                       "phi image " + std::to_string(phi.phi[o]) + " lies outside the block"});
      }
    }
    if (!contains(b.local_members, b.leader) || phi.deg(b.leader) == 0) {
      out.push_back({bi, "leader", b.leader, "leader missing from block or has degree 0"});
    }
    std::optional<Role> good_role;
    for (const Location i : b.local_members) {
      if (i == b.leader) continue;
      if (classes[i] == FacilityClass::kBad) {
        out.push_back({bi, "leader", i, "non-leader facility is bad"});
      } else if (classes[i] == FacilityClass::kGood) {
        if (good_role && *good_role != roles[i]) {
          out.push_back({bi, "leader", i, "good non-leaders have mixed colours"});
        }
        good_role = roles[i];
      }
    }
  }
  return report;
}

BlockReport check_group_partition(const std::vector<Group>& groups, const PhiMap& phi) {
  BlockReport report;
  check_partition(
      groups, phi, [](const Group& g) -> const auto& { return g.local_members; },
      [](const Group& g) -> const auto& { return g.global_members; }, report.violations);
  return report;
}

template <DistanceValue D>
BoundsReport<D> check_standard_bounds(const Instance<D>& inst, const Solution& local,
                                      const Solution& global, const PhiMap& phi) {
  const Assignment<D> s = evaluate(inst, local);
  const Assignment<D> o = evaluate(inst, global);
  const auto clients = inst.clients();
  BoundsReport<D> report;
  report.clients = clients.size();
  for (std::size_t t = 0; t < clients.size(); ++t) {
    const Location j = clients[t];
    const D c = s.distance[t];
    const D c_star = o.distance[t];
    const Location via = phi.phi[o.facility[t]];
    const Location centre = phi.cent[via];
    if (via == kNoLocation || centre == kNoLocation) {
      throw InternalError("phi map is missing an entry for client " + std::to_string(j));
    }
    const D slack_phi = 2 * c_star - (inst.distance(j, via) - c);
    const D slack_cent = 3 * c_star + c - (inst.distance(j, centre) - c);
    const bool first = t == 0;
    report.phi_min_slack = first ? slack_phi : std::min(report.phi_min_slack, slack_phi);
    report.phi_max_slack = first ? slack_phi : std::max(report.phi_max_slack, slack_phi);
    report.cent_min_slack = first ? slack_cent : std::min(report.cent_min_slack, slack_cent);
    report.cent_max_slack = first ? slack_cent : std::max(report.cent_max_slack, slack_cent);
    const D scale = inst.distance(j, centre) + c + c_star;
    const bool bad_phi = negative(slack_phi, scale);
    const bool bad_cent = negative(slack_cent, scale);
    report.phi_violations += bad_phi;
    report.cent_violations += bad_cent;
    if (bad_phi || bad_cent) report.witnesses.push_back(j);
  }
  return report;
}

template <DistanceValue D>
Decomposition<D> decompose(const Instance<D>& inst, const Solution& local,
                           const Solution& global, bool make_disjoint) {
  DisjointPair<D> pair = make_disjoint ? disjointify(inst, local, global)
                                       : DisjointPair<D>{inst, local, global, {}};
  Decomposition<D> out;
  out.instance = std::move(pair.instance);
  out.local = std::move(pair.local);
  out.global = std::move(pair.global);
  out.duplicates = std::move(pair.duplicates);
  const auto roles = out.instance.roles();
  out.phi = build_phi(out.instance, out.local, out.global);
  out.classes = classify(out.phi, roles);
  out.groups = make_groups(out.phi, out.classes, roles);
  out.group_report = check_group_partition(out.groups, out.phi);
  out.blocks = make_blocks(out.groups, roles);
  out.block_report = check_block_properties(out.blocks, out.phi, roles);
  out.bounds = check_standard_bounds(out.instance, out.local, out.global, out.phi);
  return out;
}

#define RBM_INSTANTIATE(D)                                                                 \
  template PhiMap build_phi<D>(const Instance<D>&, const Solution&, const Solution&);      \
  template BoundsReport<D> check_standard_bounds<D>(const Instance<D>&, const Solution&,   \
                                                    const Solution&, const PhiMap&);       \
  template Decomposition<D> decompose<D>(const Instance<D>&, const Solution&,              \
                                         const Solution&, bool);

RBM_INSTANTIATE(std::int64_t)
RBM_INSTANTIATE(double)
#undef RBM_INSTANTIATE

}  // namespace rbm
