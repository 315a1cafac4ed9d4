#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rbmedian/types.hpp"

namespace rbm {

/// Failure raised by metric validation, carrying the witnessing indices.
/// For triangle violations k is the intermediate location; otherwise it is
/// kNoLocation.
class MetricError : public InputError {
 public:
  enum class Kind {
    kNotSquare,
    kNegative,
    kNonzeroDiagonal,
    kAsymmetric,
    kTriangle,
    kBadEdge,
    kDisconnected,
  };

  MetricError(Kind kind, Location i, Location j, Location k, const std::string& what)
      : InputError(what), kind_(kind), i_(i), j_(j), k_(k) {}

  Kind kind() const noexcept { return kind_; }
  Location i() const noexcept { return i_; }
  Location j() const noexcept { return j_; }
  Location k() const noexcept { return k_; }

 private:
  Kind kind_;
  Location i_, j_, k_;
};

enum class TriangleCheck {
  kAuto,    // check when n <= kTriangleCheckLimit
  kAlways,
  kNever,
};

inline constexpr std::size_t kTriangleCheckLimit = 512;

struct ValidationOptions {
  /// Relative tolerance for the floating path; ignored for integer metrics.
  double tolerance = 1e-9;
  TriangleCheck triangle = TriangleCheck::kAuto;
};

enum class SentinelPolicy {
  kSumPlusOne,  // disconnected pairs get 1 + (sum of all edge lengths)
  kReject,      // a disconnected graph is an input error
};

template <DistanceValue D>
struct Edge {
  Location u;
  Location v;
  D length;
};

template <DistanceValue D>
struct GraphSpec {
  std::size_t n = 0;
  std::vector<Edge<D>> edges;
  SentinelPolicy sentinel_policy = SentinelPolicy::kSumPlusOne;
};

/// Dense symmetric (pseudo)metric over locations 0..n-1. Immutable once built.
template <DistanceValue D>
class MetricSpace {
 public:
  using value_type = D;

  MetricSpace() = default;

  /// Validates a square table. Throws MetricError naming the first offending
  /// entry in row-major order.
  static MetricSpace from_matrix(const std::vector<std::vector<D>>& table,
                                 const ValidationOptions& options = {});

  /// Shortest-path closure of a weighted graph.
  static MetricSpace from_graph(const GraphSpec<D>& spec);

  std::size_t size() const noexcept { return n_; }

  D operator()(Location i, Location j) const noexcept { return dist_[i * n_ + j]; }

  std::span<const D> row(Location i) const noexcept { return {dist_.data() + i * n_, n_}; }

  /// Sentinel used for disconnected pairs when built from a graph.
  std::optional<D> sentinel() const noexcept { return sentinel_; }

  /// Floyd-Warshall over the stored table. Leaves a valid metric unchanged.
  MetricSpace closure() const;

  /// Appends copies of the given locations; copy t sits at distance 0 from
  /// its source and inherits all of its other distances.
  MetricSpace with_duplicates(std::span<const Location> sources) const;

  std::vector<std::vector<D>> to_table() const;

  friend bool operator==(const MetricSpace& a, const MetricSpace& b) {
    return a.n_ == b.n_ && a.dist_ == b.dist_;
  }

 private:
  MetricSpace(std::size_t n, std::vector<D> dist) : n_(n), dist_(std::move(dist)) {}

  std::size_t n_ = 0;
  std::vector<D> dist_;
  std::optional<D> sentinel_;
};

/// Runs every metric check on a dense row-major table; throws MetricError.
template <DistanceValue D>
void validate_metric(std::size_t n, std::span<const D> dist, const ValidationOptions& options);

extern template class MetricSpace<std::int64_t>;
extern template class MetricSpace<double>;

}  // namespace rbm
