#include "rbmedian/metric.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rbm {
namespace {

__extension__ using Wide = __int128;

template <DistanceValue D>
std::string show(D value) {
  std::ostringstream os;
  os.precision(17);
  os << value;
  return os.str();
}

template <DistanceValue D>
bool exceeds(D lhs, D rhs, double tolerance) {
  if constexpr (kExactDistance<D>) {
    return lhs > rhs;
  } else {
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    return lhs - rhs > tolerance * scale;
  }
}

// a + b for the triangle test; integer sums are widened so huge sentinels
// cannot overflow.
template <DistanceValue D>
auto widened_sum(D a, D b) {
  if constexpr (kExactDistance<D>) {
    return static_cast<Wide>(a) + static_cast<Wide>(b);
  } else {
    return a + b;
  }
}

template <DistanceValue D>
void floyd_warshall(std::size_t n, std::vector<D>& dist, std::vector<char>& reach) {
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!reach[i * n + k]) continue;
      const D dik = dist[i * n + k];
      for (std::size_t j = 0; j < n; ++j) {
        if (!reach[k * n + j]) continue;
        const D cand = dik + dist[k * n + j];
        const std::size_t ij = i * n + j;
        if (!reach[ij] || cand < dist[ij]) {
          dist[ij] = cand;
          reach[ij] = 1;
        }
      }
    }
  }
}

}  // namespace

template <DistanceValue D>
void validate_metric(std::size_t n, std::span<const D> dist, const ValidationOptions& options) {
  const auto at = [&](std::size_t i, std::size_t j) { return dist[i * n + j]; };
  const auto loc = [](std::size_t i) { return static_cast<Location>(i); };

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const D v = at(i, j);
      bool bad = v < D{0};
      if constexpr (!kExactDistance<D>) bad = bad || !std::isfinite(v);
      if (bad) {
        throw MetricError(MetricError::Kind::kNegative, loc(i), loc(j), kNoLocation,
                          "negative or non-finite distance " + show(v) + " at (" +
                              std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (at(i, i) != D{0}) {
      throw MetricError(MetricError::Kind::kNonzeroDiagonal, loc(i), loc(i), kNoLocation,
                        "nonzero diagonal entry " + show(at(i, i)) + " at (" +
                            std::to_string(i) + "," + std::to_string(i) + ")");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (exceeds(at(i, j), at(j, i), options.tolerance) ||
          exceeds(at(j, i), at(i, j), options.tolerance)) {
        throw MetricError(MetricError::Kind::kAsymmetric, loc(i), loc(j), kNoLocation,
                          "asymmetric distances d(" + std::to_string(i) + "," +
                              std::to_string(j) + ")=" + show(at(i, j)) + " vs d(" +
                              std::to_string(j) + "," + std::to_string(i) +
                              ")=" + show(at(j, i)));
      }
    }
  }

  const bool check_triangle =
      options.triangle == TriangleCheck::kAlways ||
      (options.triangle == TriangleCheck::kAuto && n <= kTriangleCheckLimit);
  if (!check_triangle) return;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < n; ++k) {
      const D direct = at(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        const auto via = widened_sum(at(i, j), at(j, k));
        bool violated;
        if constexpr (kExactDistance<D>) {
          violated = static_cast<Wide>(direct) > via;
        } else {
          violated = exceeds(direct, via, options.tolerance);
        }
        if (violated) {
          throw MetricError(MetricError::Kind::kTriangle, loc(i), loc(k), loc(j),
                            "triangle inequality violated at (" + std::to_string(i) + "," +
                                std::to_string(k) + ") via " + std::to_string(j) + ": " +
                                show(direct) + " > " + show(at(i, j)) + " + " +
                                show(at(j, k)));
        }
      }
    }
  }
}

template <DistanceValue D>
MetricSpace<D> MetricSpace<D>::from_matrix(const std::vector<std::vector<D>>& table,
                                           const ValidationOptions& options) {
  const std::size_t n = table.size();
  std::vector<D> dist;
  dist.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (table[i].size() != n) {
      throw MetricError(MetricError::Kind::kNotSquare, static_cast<Location>(i), kNoLocation,
                        kNoLocation,
                        "distance table is not square: row " + std::to_string(i) + " has " +
                            std::to_string(table[i].size()) + " entries, expected " +
                            std::to_string(n));
    }
    dist.insert(dist.end(), table[i].begin(), table[i].end());
  }
  validate_metric<D>(n, dist, options);
  return MetricSpace(n, std::move(dist));
}

template <DistanceValue D>
MetricSpace<D> MetricSpace<D>::from_graph(const GraphSpec<D>& spec) {
  const std::size_t n = spec.n;
  std::vector<D> dist(n * n, D{0});
  std::vector<char> reach(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) reach[i * n + i] = 1;

  D total{0};
  for (std::size_t e = 0; e < spec.edges.size(); ++e) {
    const auto& edge = spec.edges[e];
    bool bad_length = edge.length < D{0};
    if constexpr (!kExactDistance<D>) bad_length = bad_length || !std::isfinite(edge.length);
    if (edge.u >= n || edge.v >= n || bad_length) {
      throw MetricError(MetricError::Kind::kBadEdge, edge.u, edge.v, kNoLocation,
                        "edge " + std::to_string(e) + " (" + std::to_string(edge.u) + "," +
                            std::to_string(edge.v) + "," + show(edge.length) +
                            ") has an endpoint out of range or a negative length");
    }
    total += edge.length;
    if (edge.u == edge.v) continue;
    for (const auto& [a, b] : {std::pair{edge.u, edge.v}, std::pair{edge.v, edge.u}}) {
      const std::size_t ab = std::size_t{a} * n + b;
      if (!reach[ab] || edge.length < dist[ab]) {
        dist[ab] = edge.length;
        reach[ab] = 1;
      }
    }
  }

  floyd_warshall(n, dist, reach);

  const D sentinel = total + D{1};
  bool disconnected = false;
  for (std::size_t ij = 0; ij < n * n; ++ij) {
    if (!reach[ij]) {
      if (spec.sentinel_policy == SentinelPolicy::kReject) {
        throw MetricError(MetricError::Kind::kDisconnected, static_cast<Location>(ij / n),
                          static_cast<Location>(ij % n), kNoLocation,
                          "graph is disconnected between " + std::to_string(ij / n) + " and " +
                              std::to_string(ij % n));
      }
      dist[ij] = sentinel;
      disconnected = true;
    }
  }

  MetricSpace space(n, std::move(dist));
  if (disconnected) space.sentinel_ = sentinel;
  return space;
}

template <DistanceValue D>
MetricSpace<D> MetricSpace<D>::closure() const {
  std::vector<D> dist = dist_;
  std::vector<char> reach(n_ * n_, 1);
  floyd_warshall(n_, dist, reach);
  MetricSpace out(n_, std::move(dist));
  out.sentinel_ = sentinel_;
  return out;
}

template <DistanceValue D>
MetricSpace<D> MetricSpace<D>::with_duplicates(std::span<const Location> sources) const {
  const std::size_t m = n_ + sources.size();
  std::vector<Location> origin(m);
  for (std::size_t i = 0; i < n_; ++i) origin[i] = static_cast<Location>(i);
  for (std::size_t t = 0; t < sources.size(); ++t) {
    if (sources[t] >= n_) {
      throw InputError("cannot duplicate location " + std::to_string(sources[t]) +
                       ": out of range");
    }
    origin[n_ + t] = sources[t];
  }
  std::vector<D> dist(m * m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) dist[a * m + b] = (*this)(origin[a], origin[b]);
  }
  MetricSpace out(m, std::move(dist));
  out.sentinel_ = sentinel_;
  return out;
}

template <DistanceValue D>
std::vector<std::vector<D>> MetricSpace<D>::to_table() const {
  std::vector<std::vector<D>> table(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    table[i].assign(dist_.begin() + i * n_, dist_.begin() + (i + 1) * n_);
  }
  return table;
}

template class MetricSpace<std::int64_t>;
template class MetricSpace<double>;
template void validate_metric<std::int64_t>(std::size_t, std::span<const std::int64_t>,
                                            const ValidationOptions&);
template void validate_metric<double>(std::size_t, std::span<const double>,
                                      const ValidationOptions&);

}  // namespace rbm
