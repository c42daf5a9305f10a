#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pyrsts/group.hpp"
#include "pyrsts/sequences.hpp"

namespace pyrsts {

/// (K,3,1) difference matrix: 3 rows of |K| entries such that the difference
/// of any two distinct rows is a permutation of K.
struct DifferenceMatrix {
  AbelianGroup group;
  std::array<std::vector<GroupElement>, 3> rows;
};

/// True iff the Sylow 2-subgroup of K is trivial or noncyclic, which is the
/// exact existence condition for a (K,3,1)-DM over an abelian K.
bool dm_exists(const AbelianGroup& k);

struct DmCheck {
  bool pass = false;
  std::vector<std::string> problems;
  std::string summary() const;
};

DmCheck verify_dm(const DifferenceMatrix& m);

inline constexpr std::uint64_t kDefaultDmBudget = 400'000'000;

/// Builds a DM for any K with dm_exists(K): rows (0, g, 2g) for odd order,
/// tensor products for composite cases, and a direct orthomorphism search
/// for small indecomposable 2-groups. First row is all zeros. Throws if
/// dm_exists(K) is false or the search budget runs out.
DifferenceMatrix dm_build(const AbelianGroup& k, std::uint64_t max_nodes = kDefaultDmBudget);

/// Columnwise tensor product; valid whenever both inputs are valid.
DifferenceMatrix dm_product(const DifferenceMatrix& a, const DifferenceMatrix& b);

struct DmSearch {
  SearchStatus status = SearchStatus::kAbsent;
  std::optional<DifferenceMatrix> dm;
  std::uint64_t nodes = 0;
};

/// Exhaustive backtracking over normalized orthomorphisms. kAbsent is a
/// proof of nonexistence for the given group.
DmSearch dm_search(const AbelianGroup& k, std::uint64_t max_nodes = kDefaultDmBudget);

}  // namespace pyrsts
