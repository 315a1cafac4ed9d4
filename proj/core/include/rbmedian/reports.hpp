#pragma once

#include <string>

#include "rbmedian/decomposition.hpp"
#include "rbmedian/exact.hpp"
#include "rbmedian/gap.hpp"
#include "rbmedian/local_search.hpp"

namespace rbm {

// JSON renderings of the result types. Integer costs are emitted as JSON
// integers, fractional ones as exact decimal strings.

template <DistanceValue D>
std::string to_json(const SearchResult<D>& result);

template <DistanceValue D>
std::string to_json(const OptResult<D>& result);

template <DistanceValue D>
std::string to_json(const LocalOptVerdict<D>& verdict);

template <DistanceValue D>
std::string to_json(const Decomposition<D>& dec);

std::string to_json(const GapReport& report);

/// Expected values of a gap instance (costs, ratio, bound, parameters).
std::string expectations_json(const GapInstance& gap);

}  // namespace rbm
