#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pyrsts/group.hpp"

namespace pyrsts {

/// Unordered triple of distinct group elements, stored sorted.
struct Triple {
  std::array<GroupElement, 3> points;

  static Triple of(const AbelianGroup& g, const GroupElement& a, const GroupElement& b,
                   const GroupElement& c);

  auto operator<=>(const Triple&) const = default;
};

/// The six signed pairwise differences +-{a-b, a-c, b-c}, with multiplicity.
std::array<GroupElement, 6> delta(const AbelianGroup& g, const Triple& t);

/// Family of subgroups of a common parent. A proper partial spread has
/// pairwise trivially intersecting members; verify_relative_df checks that.
struct PartialSpread {
  std::vector<Subgroup> members;
};

/// Type descriptor {2^f, 3^e}; member orders outside {2,3} land in `other`
/// and flag the spread as outside this artifact's scope.
struct SpreadType {
  std::int64_t order2 = 0;  // f
  std::int64_t order3 = 0;  // e
  std::vector<std::int64_t> other;

  bool clean() const { return other.empty(); }
  std::string to_string() const;
  /// Parses "2^7,3^2"; bare "2" or "3" mean multiplicity 1; "none"/"" is empty.
  static SpreadType parse(std::string_view text);
  bool operator==(const SpreadType&) const = default;
};

SpreadType spread_type(const PartialSpread& spread);

/// A (G, Sigma, 3, 1) difference family: base triples whose difference list
/// tiles G outside the spread union, each element exactly once.
struct DifferenceFamily {
  AbelianGroup group;
  PartialSpread spread;
  std::vector<Triple> base_blocks;
};

/// Verification outcome. `spread_ok` covers pairwise trivial intersection,
/// `delta_ok` the exact difference tiling.
struct DfCheck {
  bool pass = false;
  bool spread_ok = false;
  bool delta_ok = false;
  std::int64_t missing_count = 0;
  std::int64_t duplicate_count = 0;
  std::vector<GroupElement> missing;     // capped sample
  std::vector<GroupElement> duplicated;  // capped sample
  std::vector<std::string> problems;

  std::string summary() const;
};

DfCheck verify_relative_df(const DifferenceFamily& df);

/// Characteristic vector over packed keys of the union of spread members
/// (zero is always a hole, even for an empty spread).
std::vector<char> hole_mask(const AbelianGroup& g, const PartialSpread& spread);
std::int64_t hole_count(const std::vector<char>& mask);

/// Decomposes a hole set into the canonical partial spread of prime-order
/// subgroups (order 2 and 3 members). Fails if any hole element has a
/// different order, since that cannot come from a {2^f,3^e} spread.
std::optional<PartialSpread> prime_spread_from_holes(const AbelianGroup& g,
                                                     const std::vector<char>& mask,
                                                     std::string* error = nullptr);

/// Sorts blocks and spread members into the canonical serialization order.
DifferenceFamily canonicalized(DifferenceFamily df);

}  // namespace pyrsts
