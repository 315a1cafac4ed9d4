#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "rbmedian/instance.hpp"

namespace rbm {

/// Maps each facility of a global solution O to its nearest facility of a
/// local solution S. Per-location tables are indexed by Location and hold
/// kNoLocation / empty entries for locations outside the relevant set.
struct PhiMap {
  std::vector<Location> local;   // S, ascending
  std::vector<Location> global;  // O, ascending
  std::vector<Location> phi;     // phi[i*] for i* in O
  std::vector<std::vector<Location>> preimage;  // phi^{-1}(i) for i in S, ascending
  std::vector<Location> cent;    // nearest preimage of i, when deg(i) > 0
  std::vector<char> in_local;
  std::vector<char> in_global;

  std::size_t deg(Location i) const { return preimage[i].size(); }
};

/// Requires S and O to be facility-disjoint (see disjointify); throws
/// InputError otherwise. All ties go to the lowest index.
template <DistanceValue D>
PhiMap build_phi(const Instance<D>& inst, const Solution& local, const Solution& global);

enum class FacilityClass { kVeryGood, kGood, kBad };

const char* to_string(FacilityClass c);

/// Class of every local facility, indexed by Location (entries for other
/// locations are kVeryGood and meaningless). deg = 0 gives kVeryGood; no
/// same-colour preimage gives kGood; anything else is kBad.
std::vector<FacilityClass> classify(const PhiMap& phi, std::span<const Role> roles);

enum class GroupClass { kBalanced, kGood, kBad };

const char* to_string(GroupClass c);

struct Group {
  Location representative = kNoLocation;
  std::vector<Location> local_members;   // ascending, includes the representative
  std::vector<Location> global_members;  // = phi^{-1}(representative)
  GroupClass kind = GroupClass::kBalanced;
};

/// Classifies a candidate group by colour counts alone.
GroupClass group_class(const Group& g, const std::vector<FacilityClass>& classes,
                       std::span<const Role> roles);

/// Partitions S ∪ O into groups. Representatives are taken in ascending
/// index order and each is padded with very-good facilities (ascending):
/// balanced if the pools allow it, else a good group, else the pool of the
/// deficient colour is exhausted first and the rest filled from the other.
/// Throws InternalError if the counting guarantees ever fail.
std::vector<Group> make_groups(const PhiMap& phi, const std::vector<FacilityClass>& classes,
                               std::span<const Role> roles);

struct Block {
  std::vector<std::size_t> groups;  // indices into the make_groups output
  Location leader = kNoLocation;
  std::vector<Location> local_members;
  std::vector<Location> global_members;
};

/// Combines groups into blocks: balanced groups stand alone; good groups
/// with red and blue representatives are paired (leader: lower index);
/// each bad group then absorbs good groups until its blue deficiency is
/// zero. Throws InternalError if groups remain or a bad group cannot be
/// completed.
std::vector<Block> make_blocks(const std::vector<Group>& groups, std::span<const Role> roles);

/// |G ∩ B*| − |G ∩ B| for a set of locations, with B the blue members of S
/// and B* the blue members of O.
int blue_deficiency(std::span<const Location> members, const PhiMap& phi,
                    std::span<const Role> roles);

int blue_deficiency(const Group& g, std::span<const Role> roles);

struct Violation {
  std::size_t block = 0;
  std::string property;  // "partition", "colour-balance", "phi-closure", "leader"
  Location witness = kNoLocation;
  std::string detail;
};

struct BlockReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks that the blocks partition S ∪ O, are colour balanced, closed
/// under phi and phi^{-1}, and that every non-leader local facility is good
/// or very good with all good ones sharing a colour.
BlockReport check_block_properties(const std::vector<Block>& blocks, const PhiMap& phi,
                                   std::span<const Role> roles);

/// Same partition test applied to groups.
BlockReport check_group_partition(const std::vector<Group>& groups, const PhiMap& phi);

/// Per-client rerouting bounds:
///   d(j, phi(o_j)) − c_j <= 2 c*_j                 (reroute via phi)
///   d(j, cent(phi(o_j))) − c_j <= 3 c*_j + c_j     (reroute via cent)
template <DistanceValue D>
struct BoundsReport {
  std::size_t clients = 0;
  std::size_t phi_violations = 0;
  std::size_t cent_violations = 0;
  /// Smallest and largest rhs − lhs over all clients (0 when there are none).
  D phi_min_slack{0}, phi_max_slack{0};
  D cent_min_slack{0}, cent_max_slack{0};
  std::vector<Location> witnesses;  // clients violating either bound

  bool ok() const { return phi_violations == 0 && cent_violations == 0; }
};

template <DistanceValue D>
BoundsReport<D> check_standard_bounds(const Instance<D>& inst, const Solution& local,
                                      const Solution& global, const PhiMap& phi);

/// The whole pipeline on one (S, O) pair.
template <DistanceValue D>
struct Decomposition {
  Instance<D> instance;  // after disjointify when requested
  Solution local;
  Solution global;
  std::vector<Location> duplicates;
  PhiMap phi;
  std::vector<FacilityClass> classes;
  std::vector<Group> groups;
  std::vector<Block> blocks;
  BlockReport group_report;
  BlockReport block_report;
  BoundsReport<D> bounds;

  bool ok() const { return group_report.ok() && block_report.ok() && bounds.ok(); }
};

/// With `make_disjoint` false, overlapping solutions are rejected.
template <DistanceValue D>
Decomposition<D> decompose(const Instance<D>& inst, const Solution& local,
                           const Solution& global, bool make_disjoint);

}  // namespace rbm
