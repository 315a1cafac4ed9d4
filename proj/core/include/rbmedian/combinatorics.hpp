#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace rbm {

inline constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSaturated / b) return kSaturated;
  return a * b;
}

inline std::uint64_t saturating_add(std::uint64_t a, std::uint64_t b) {
  return a > kSaturated - b ? kSaturated : a + b;
}

/// C(n, k), saturating at kSaturated.
inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // result * (n - k + i) / i is always integral; divide the gcd out first.
    std::uint64_t num = n - k + i;
    std::uint64_t den = i;
    const std::uint64_t g1 = std::gcd(num, den);
    num /= g1;
    den /= g1;
    const std::uint64_t g2 = std::gcd(result, den);
    result /= g2;
    den /= g2;
    if (den != 1) return kSaturated;  // unreachable for exact arithmetic
    result = saturating_mul(result, num);
    if (result == kSaturated) return kSaturated;
  }
  return result;
}

/// Lexicographic cursor over the k-subsets of {0, ..., n-1}.
class CombinationCursor {
 public:
  CombinationCursor(std::size_t n, std::size_t k) : n_(n), idx_(k), valid_(k <= n) {
    std::iota(idx_.begin(), idx_.end(), std::size_t{0});
  }

  bool valid() const { return valid_; }
  std::span<const std::size_t> indices() const { return idx_; }
  std::size_t size() const { return idx_.size(); }

  /// Advances to the next subset; returns false (and becomes invalid) on wrap.
  bool next() {
    if (!valid_) return false;
    const std::size_t k = idx_.size();
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (idx_[i] < n_ - k + i) {
        ++idx_[i];
        for (std::size_t j = i + 1; j < k; ++j) idx_[j] = idx_[j - 1] + 1;
        return true;
      }
    }
    valid_ = false;
    return false;
  }

  void reset() {
    std::iota(idx_.begin(), idx_.end(), std::size_t{0});
    valid_ = idx_.size() <= n_;
  }

 private:
  std::size_t n_;
  std::vector<std::size_t> idx_;
  bool valid_;
};

}  // namespace rbm
