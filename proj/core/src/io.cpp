#include "rbmedian/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

namespace rbm {
namespace {

using nlohmann::json;

// A distance as read from a document, before the integer/float decision.
struct RawNumber {
  bool integral = true;
  std::int64_t i = 0;
  double d = 0.0;
};

double parse_decimal(const std::string& s, const std::string& where) {
  double value = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw InputError(where + ": '" + s + "' is not a decimal number");
  }
  return value;
}

RawNumber read_number(const json& v, const std::string& where) {
  RawNumber out;
  if (v.is_number_integer()) {
    out.i = v.get<std::int64_t>();
    out.d = static_cast<double>(out.i);
  } else if (v.is_number_float()) {
    out.integral = false;
    out.d = v.get<double>();
  } else if (v.is_string()) {
    out.integral = false;
    out.d = parse_decimal(v.get<std::string>(), where);
  } else {
    throw InputError(where + ": expected a number or decimal string");
  }
  return out;
}

const json& require(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw InputError(std::string("missing field \"") + key + "\"");
  }
  return doc.at(key);
}

std::vector<Location> read_ids(const json& doc, const char* key) {
  const json& arr = require(doc, key);
  if (!arr.is_array()) throw InputError(std::string("\"") + key + "\" must be an array");
  std::vector<Location> ids;
  for (const json& v : arr) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0 ||
        v.get<std::int64_t>() >= static_cast<std::int64_t>(kNoLocation)) {
      throw InputError(std::string("\"") + key + "\" must contain nonnegative integer ids");
    }
    ids.push_back(static_cast<Location>(v.get<std::int64_t>()));
  }
  return ids;
}

std::size_t read_count(const json& doc, const char* key) {
  const json& v = require(doc, key);
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
    throw InputError(std::string("\"") + key + "\" must be a nonnegative integer");
  }
  return static_cast<std::size_t>(v.get<std::int64_t>());
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed document: ") + e.what());
  }
}

template <DistanceValue D>
D pick(const RawNumber& raw) {
  if constexpr (kExactDistance<D>) {
    return raw.i;
  } else {
    return raw.d;
  }
}

template <DistanceValue D>
AnyInstance build(const json& doc, std::size_t n, const json& metric,
                  const std::vector<std::vector<RawNumber>>& rows,
                  const std::vector<std::tuple<Location, Location, RawNumber>>& edges,
                  SentinelPolicy policy) {
  MetricSpace<D> space;
  if (metric.contains("matrix")) {
    std::vector<std::vector<D>> table(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      table[i].reserve(rows[i].size());
      for (const RawNumber& r : rows[i]) table[i].push_back(pick<D>(r));
    }
    space = MetricSpace<D>::from_matrix(table);
  } else {
    GraphSpec<D> spec;
    spec.n = n;
    spec.sentinel_policy = policy;
    for (const auto& [u, v, len] : edges) spec.edges.push_back({u, v, pick<D>(len)});
    space = MetricSpace<D>::from_graph(spec);
  }
  return Instance<D>(std::move(space), read_ids(doc, "clients"), read_ids(doc, "red"),
                     read_ids(doc, "blue"), read_count(doc, "k_r"), read_count(doc, "k_b"));
}

json ids_json(std::span<const Location> ids) {
  json arr = json::array();
  for (const Location i : ids) arr.push_back(i);
  return arr;
}

}  // namespace

std::string exact_decimal(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw InputError("cannot format distance");
  return std::string(buf, ptr);
}

AnyInstance parse_instance(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw InputError("instance document must be a JSON object");
  const std::size_t n = read_count(doc, "n");
  const json& metric = require(doc, "metric");

  bool integral = true;
  std::vector<std::vector<RawNumber>> rows;
  std::vector<std::tuple<Location, Location, RawNumber>> edges;
  SentinelPolicy policy = SentinelPolicy::kSumPlusOne;

  if (metric.is_object() && metric.contains("matrix")) {
    const json& m = metric.at("matrix");
    if (!m.is_array()) throw InputError("\"matrix\" must be an array of rows");
    if (m.size() != n) {
      throw InputError("matrix has " + std::to_string(m.size()) + " rows but n=" +
                       std::to_string(n));
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!m[i].is_array() || m[i].size() != n) {
        throw InputError("matrix row " + std::to_string(i) + " must have n=" +
                         std::to_string(n) + " entries");
      }
      auto& row = rows.emplace_back();
      for (std::size_t j = 0; j < n; ++j) {
        row.push_back(read_number(m[i][j], "matrix[" + std::to_string(i) + "][" +
                                               std::to_string(j) + "]"));
        integral = integral && row.back().integral;
      }
    }
  } else if (metric.is_object() && metric.contains("graph")) {
    const json& g = metric.at("graph");
    const json& es = require(g, "edges");
    if (!es.is_array()) throw InputError("\"edges\" must be an array");
    for (std::size_t e = 0; e < es.size(); ++e) {
      const json& edge = es[e];
      const std::string where = "edge " + std::to_string(e);
      if (!edge.is_array() || edge.size() != 3 || !edge[0].is_number_integer() ||
          !edge[1].is_number_integer()) {
        throw InputError(where + " must be [u, v, length]");
      }
      const auto u = edge[0].get<std::int64_t>();
      const auto v = edge[1].get<std::int64_t>();
      if (u < 0 || v < 0 || static_cast<std::size_t>(u) >= n ||
          static_cast<std::size_t>(v) >= n) {
        throw InputError(where + " has an endpoint outside 0..n-1");
      }
      edges.emplace_back(static_cast<Location>(u), static_cast<Location>(v),
                         read_number(edge[2], where));
      integral = integral && std::get<2>(edges.back()).integral;
    }
    if (g.contains("sentinel_policy")) {
      const std::string s = g.at("sentinel_policy").get<std::string>();
      if (s == "reject") {
        policy = SentinelPolicy::kReject;
      } else if (s != "sum_plus_one") {
        throw InputError("unknown sentinel_policy '" + s + "'");
      }
    }
  } else {
    throw InputError("\"metric\" must contain either \"matrix\" or \"graph\"");
  }

  try {
    if (integral) return build<std::int64_t>(doc, n, metric, rows, edges, policy);
    return build<double>(doc, n, metric, rows, edges, policy);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed document: ") + e.what());
  }
}

template <DistanceValue D>
std::string serialize(const Instance<D>& inst) {
  json matrix = json::array();
  for (std::size_t i = 0; i < inst.size(); ++i) {
    json row = json::array();
    for (const D v : inst.space().row(static_cast<Location>(i))) {
      if constexpr (kExactDistance<D>) {
        row.push_back(v);
      } else {
        row.push_back(exact_decimal(v));
      }
    }
    matrix.push_back(std::move(row));
  }
  json doc;
  doc["n"] = inst.size();
  doc["metric"] = {{"matrix", std::move(matrix)}};
  doc["clients"] = ids_json(inst.clients());
  doc["red"] = ids_json(inst.red());
  doc["blue"] = ids_json(inst.blue());
  doc["k_r"] = inst.k_r();
  doc["k_b"] = inst.k_b();
  return doc.dump() + "\n";
}

std::string serialize(const AnyInstance& inst) {
  return std::visit([](const auto& i) { return serialize(i); }, inst);
}

Solution parse_solution(std::string_view text) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw InputError("solution document must be a JSON object");
  return Solution::sorted(read_ids(doc, "R"), read_ids(doc, "B"));
}

std::string serialize(const Solution& sol) {
  json doc;
  doc["R"] = ids_json(sol.red);
  doc["B"] = ids_json(sol.blue);
  return doc.dump() + "\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  out << contents;
  if (!out) throw InputError("failed writing '" + path + "'");
}

template std::string serialize<std::int64_t>(const Instance<std::int64_t>&);
template std::string serialize<double>(const Instance<double>&);

}  // namespace rbm
