#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "rbmedian/instance.hpp"
#include "rbmedian/local_search.hpp"

namespace rbm {

inline constexpr std::uint64_t kDefaultExactCap = 100'000'000;

template <DistanceValue D>
struct OptResult {
  Solution solution;
  D cost{0};
  std::uint64_t examined = 0;
};

/// C(|R|, k_r)·C(|B|, k_b), saturating.
template <DistanceValue D>
std::uint64_t solution_space_size(const Instance<D>& inst) {
  return saturating_mul(binomial(inst.red().size(), inst.k_r()),
                        binomial(inst.blue().size(), inst.k_b()));
}

/// Exhaustive global optimum; returns the lexicographically least optimal
/// (R, B). Throws CapExceeded instead of sampling when the space is larger
/// than `cap`. Work is split over `threads` with a deterministic reduction.
template <DistanceValue D>
OptResult<D> brute_force_opt(const Instance<D>& inst, std::uint64_t cap = kDefaultExactCap,
                             unsigned threads = 1);

template <DistanceValue D>
struct LocalOptVerdict {
  bool locally_optimal = true;
  /// First strictly improving move in canonical order, if any.
  std::optional<SwapMove> witness;
  D witness_delta{0};
  std::uint64_t witness_index = 0;
  std::uint64_t scanned = 0;
};

/// Exhaustive scan of the ≤p-per-colour neighbourhood. Zero-delta moves do
/// not disqualify. Throws CapExceeded if the neighbourhood exceeds `cap`.
template <DistanceValue D>
LocalOptVerdict<D> is_local_opt(const Instance<D>& inst, const Solution& sol, std::size_t p,
                                std::uint64_t cap = kDefaultExactCap, unsigned threads = 1);

enum class OptSource { kBruteForce, kLowerBoundCertificate };

inline const char* to_string(OptSource s) {
  return s == OptSource::kBruteForce ? "brute-force" : "lower-bound-certificate";
}

template <DistanceValue D>
struct CertifiedOpt {
  D cost{0};
  OptSource source = OptSource::kBruteForce;
  Solution solution;
};

/// The optimum cost when it can be established exactly: by brute force when
/// the space fits under `cap`, otherwise by a candidate whose cost meets
/// all_open_lower_bound(). nullopt when neither applies.
template <DistanceValue D>
std::optional<CertifiedOpt<D>> certified_opt(const Instance<D>& inst,
                                             std::span<const Solution> candidates,
                                             std::uint64_t cap = kDefaultExactCap,
                                             unsigned threads = 1);

}  // namespace rbm
