#include "rbmedian/reports.hpp"

#include <json.hpp>

#include "rbmedian/io.hpp"

namespace rbm {
namespace {

using nlohmann::json;

template <DistanceValue D>
json value(D v) {
  if constexpr (kExactDistance<D>) {
    return v;
  } else {
    return exact_decimal(v);
  }
}

json solution_json(const Solution& s) { return {{"R", s.red}, {"B", s.blue}}; }

json move_json(const SwapMove& m) {
  return {{"close_red", m.close_red},
          {"open_red", m.open_red},
          {"close_blue", m.close_blue},
          {"open_blue", m.open_blue}};
}

json violations_json(const BlockReport& report) {
  json out = json::array();
  for (const Violation& v : report.violations) {
    json w = v.witness == kNoLocation ? json(nullptr) : json(v.witness);
    out.push_back({{"unit", v.block}, {"property", v.property}, {"witness", w},
                   {"detail", v.detail}});
  }
  return out;
}

}  // namespace

template <DistanceValue D>
std::string to_json(const SearchResult<D>& r) {
  json trace = json::array();
  for (const D c : r.trace) trace.push_back(value(c));
  json doc{{"solution", solution_json(r.solution)},
           {"cost", value(r.assignment.total)},
           {"iterations", r.iterations},
           {"termination", to_string(r.termination)},
           {"trace", std::move(trace)}};
  return doc.dump(2) + "\n";
}

template <DistanceValue D>
std::string to_json(const OptResult<D>& r) {
  json doc{{"solution", solution_json(r.solution)},
           {"cost", value(r.cost)},
           {"examined", r.examined}};
  return doc.dump(2) + "\n";
}

template <DistanceValue D>
std::string to_json(const LocalOptVerdict<D>& v) {
  json doc{{"locally_optimal", v.locally_optimal}, {"scanned", v.scanned}};
  if (v.witness) {
    doc["witness"] = move_json(*v.witness);
    doc["witness_delta"] = value(v.witness_delta);
    doc["witness_index"] = v.witness_index;
  }
  return doc.dump(2) + "\n";
}

template <DistanceValue D>
std::string to_json(const Decomposition<D>& dec) {
  const auto roles = dec.instance.roles();
  json facilities = json::array();
  for (const Location i : dec.phi.local) {
    json f{{"id", i},
           {"colour", to_string(dec.instance.colour(i))},
           {"deg", dec.phi.deg(i)},
           {"class", to_string(dec.classes[i])},
           {"preimage", dec.phi.preimage[i]}};
    f["cent"] = dec.phi.cent[i] == kNoLocation ? json(nullptr) : json(dec.phi.cent[i]);
    facilities.push_back(std::move(f));
  }
  json phi = json::object();
  for (const Location o : dec.phi.global) phi[std::to_string(o)] = dec.phi.phi[o];

  json groups = json::array();
  for (const Group& g : dec.groups) {
    groups.push_back({{"representative", g.representative},
                      {"class", to_string(g.kind)},
                      {"local", g.local_members},
                      {"global", g.global_members},
                      {"blue_deficiency", blue_deficiency(g, roles)}});
  }
  json blocks = json::array();
  for (const Block& b : dec.blocks) {
    std::vector<Location> members = b.local_members;
    members.insert(members.end(), b.global_members.begin(), b.global_members.end());
    blocks.push_back({{"leader", b.leader},
                      {"groups", b.groups},
                      {"local", b.local_members},
                      {"global", b.global_members},
                      {"blue_deficiency",
                       blue_deficiency(members, dec.phi, roles)}});
  }
  json bounds{{"clients", dec.bounds.clients},
              {"phi_reroute", {{"violations", dec.bounds.phi_violations},
                               {"min_slack", value(dec.bounds.phi_min_slack)},
                               {"max_slack", value(dec.bounds.phi_max_slack)}}},
              {"cent_reroute", {{"violations", dec.bounds.cent_violations},
                                {"min_slack", value(dec.bounds.cent_min_slack)},
                                {"max_slack", value(dec.bounds.cent_max_slack)}}},
              {"witnesses", dec.bounds.witnesses}};
  json doc{{"ok", dec.ok()},
           {"local", solution_json(dec.local)},
           {"global", solution_json(dec.global)},
           {"duplicated", dec.duplicates},
           {"phi", std::move(phi)},
           {"facilities", std::move(facilities)},
           {"groups", std::move(groups)},
           {"blocks", std::move(blocks)},
           {"checks",
            {{"group_partition", {{"ok", dec.group_report.ok()},
                                  {"violations", violations_json(dec.group_report)}}},
             {"block_properties", {{"ok", dec.block_report.ok()},
                                   {"violations", violations_json(dec.block_report)}}},
             {"rerouting_bounds", std::move(bounds)}}}};
  return doc.dump(2) + "\n";
}

std::string to_json(const GapReport& r) {
  json checks = json::array();
  for (const GapCheck& c : r.checks) {
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  }
  json doc{{"p", r.params.p},
           {"ell", r.params.ell},
           {"ok", r.ok()},
           {"local_cost", r.local_cost},
           {"global_cost", r.global_cost},
           {"moves_scanned", r.moves_scanned},
           {"checks", std::move(checks)}};
  doc["opt_cost"] = r.opt_cost ? json(*r.opt_cost) : json(nullptr);
  doc["opt_source"] = r.opt_source ? json(to_string(*r.opt_source)) : json(nullptr);
  if (r.witness) {
    doc["witness"] = move_json(*r.witness);
    doc["witness_delta"] = r.witness_delta;
    doc["witness_case"] = r.witness_case;
  }
  return doc.dump(2) + "\n";
}

std::string expectations_json(const GapInstance& gap) {
  json doc{{"p", gap.params.p},
           {"ell", gap.params.ell},
           {"alpha", gap.params.alpha()},
           {"beta", gap.params.beta()},
           {"k_r", gap.params.k_r()},
           {"k_b", gap.params.k_b()},
           {"expected_local_cost", gap.expected_local_cost},
           {"expected_global_cost", gap.expected_global_cost},
           {"expected_ratio", to_string(gap.expected_ratio)},
           {"ratio_lower_bound", to_string(gap.ratio_lower_bound)}};
  return doc.dump(2) + "\n";
}

#define RBM_INSTANTIATE(D)                                        \
  template std::string to_json<D>(const SearchResult<D>&);        \
  template std::string to_json<D>(const OptResult<D>&);           \
  template std::string to_json<D>(const LocalOptVerdict<D>&);     \
  template std::string to_json<D>(const Decomposition<D>&);

RBM_INSTANTIATE(std::int64_t)
RBM_INSTANTIATE(double)
#undef RBM_INSTANTIATE

}  // namespace rbm
