#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "rbmedian/instance.hpp"

namespace rbm {

/// An instance whose distance type is decided by the document: all-integer
/// distances select the exact path, anything fractional the floating path.
using AnyInstance = std::variant<Instance<std::int64_t>, Instance<double>>;

/// Instance document:
///   {"n": N, "metric": {"matrix": [[...]]} | {"graph": {"edges": [[u,v,len],...]}},
///    "clients": [...], "red": [...], "blue": [...], "k_r": K, "k_b": K}
/// Fractional distances may be JSON numbers or decimal strings.
/// Throws InputError (or MetricError) on malformed or inconsistent documents.
AnyInstance parse_instance(std::string_view text);

/// Always writes the matrix form. Integers are emitted as JSON integers,
/// fractional values as round-trip exact decimal strings.
template <DistanceValue D>
std::string serialize(const Instance<D>& inst);

std::string serialize(const AnyInstance& inst);

/// Solution document: {"R": [...], "B": [...]}.
Solution parse_solution(std::string_view text);
std::string serialize(const Solution& sol);

/// Shortest decimal string that parses back to exactly `value`.
std::string exact_decimal(double value);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace rbm
