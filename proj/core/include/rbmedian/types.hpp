#pragma once

#include <concepts>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace rbm {

/// Index of a location (client or facility) in a metric space.
using Location = std::uint32_t;

inline constexpr Location kNoLocation = std::numeric_limits<Location>::max();

/// Distances are either exact 64-bit integers or doubles.
template <class D>
concept DistanceValue = std::same_as<D, std::int64_t> || std::same_as<D, double>;

template <DistanceValue D>
inline constexpr bool kExactDistance = std::same_as<D, std::int64_t>;

enum class Role : std::uint8_t { kClient, kRed, kBlue };

enum class Colour : std::uint8_t { kRed, kBlue };

inline const char* to_string(Colour c) { return c == Colour::kRed ? "red" : "blue"; }

/// Raised for malformed inputs: bad metrics, inconsistent instances, bad
/// documents. Callers at the CLI boundary map this to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An exhaustive routine refused to run because its search space exceeds the
/// configured cap.
class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(const std::string& what, std::uint64_t required, std::uint64_t cap)
      : std::runtime_error(what), required_(required), cap_(cap) {}

  std::uint64_t required() const noexcept { return required_; }
  std::uint64_t cap() const noexcept { return cap_; }

 private:
  std::uint64_t required_;
  std::uint64_t cap_;
};

/// A structural guarantee that should hold unconditionally was violated.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace rbm
