#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pyrsts {

/// Generic domain error for invalid inputs and broken preconditions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A search ran out of its node budget; distinct from a proven negative.
class BudgetError : public Error {
 public:
  using Error::Error;
};

/// An object that was supposed to be verified failed its own checks.
class VerifyError : public Error {
 public:
  using Error::Error;
};

/// Element of a finite abelian group, stored as one residue per cyclic factor.
/// Comparison is lexicographic on the residue vector, which matches the
/// mixed-radix packed key and is the canonical element order used everywhere.
struct GroupElement {
  std::vector<std::int32_t> coords;

  auto operator<=>(const GroupElement&) const = default;
};

/// Finite abelian group presented as Z_{n_1} x ... x Z_{n_r}, n_i >= 2.
/// An empty factor list is the trivial group. Values are immutable after
/// construction and safe to share across threads.
class AbelianGroup {
 public:
  AbelianGroup() : order_(1) {}
  explicit AbelianGroup(std::vector<std::int64_t> factors);

  static AbelianGroup cyclic(std::int64_t n);
  /// Parses the text form "n1,n2,...": e.g. "2,2,2,12". "1" or "" is trivial.
  static AbelianGroup parse(std::string_view text);

  const std::vector<std::int64_t>& factors() const { return factors_; }
  std::int64_t order() const { return order_; }
  std::size_t rank() const { return factors_.size(); }
  bool trivial() const { return factors_.empty(); }
  std::string descriptor() const;

  GroupElement zero() const;
  /// Builds an element from arbitrary integers, reducing mod the factors.
  GroupElement make(std::span<const std::int64_t> coords) const;
  GroupElement make(std::initializer_list<std::int64_t> coords) const;

  bool shape_ok(const GroupElement& e) const;
  void require_element(const GroupElement& e) const;

  GroupElement add(const GroupElement& a, const GroupElement& b) const;
  GroupElement sub(const GroupElement& a, const GroupElement& b) const;
  GroupElement neg(const GroupElement& a) const;
  GroupElement mul(std::int64_t k, const GroupElement& a) const;
  std::int64_t element_order(const GroupElement& a) const;

  /// Mixed-radix key in [0, order); coords[0] is the most significant digit,
  /// so packed order coincides with lexicographic element order.
  std::int64_t pack(const GroupElement& e) const;
  GroupElement unpack(std::int64_t key) const;

  /// All elements in canonical (packed) order. Guarded against huge groups.
  std::vector<GroupElement> elements() const;

  /// Multiset of prime-power orders of the primary cyclic decomposition,
  /// sorted ascending. Two groups are isomorphic iff these lists match.
  std::vector<std::int64_t> primary_decomposition() const;

  std::string format_element(const GroupElement& e) const;
  /// Parses "(1,0,7)"; also accepts "1,0,7" and "()" for the trivial group.
  GroupElement parse_element(std::string_view text) const;

  bool operator==(const AbelianGroup&) const = default;

 private:
  std::vector<std::int64_t> factors_;
  std::int64_t order_;
};

/// All x != 0 with x + x = 0, in canonical order. For a group with m even
/// invariant factors there are exactly 2^m - 1 of them.
std::vector<GroupElement> involutions(const AbelianGroup& g);

/// Subgroup of a parent group, stored as its full sorted element set.
/// All spread members at desk scale are tiny, so explicit sets are fine.
class Subgroup {
 public:
  Subgroup(AbelianGroup parent, std::vector<GroupElement> elements);

  static Subgroup trivial(const AbelianGroup& parent);
  static Subgroup generated_by(const AbelianGroup& parent,
                               std::span<const GroupElement> generators);

  const AbelianGroup& parent() const { return parent_; }
  const std::vector<GroupElement>& elements() const { return elements_; }
  std::int64_t order() const { return static_cast<std::int64_t>(elements_.size()); }
  bool contains(const GroupElement& e) const;
  bool intersects_trivially(const Subgroup& other) const;

  auto operator<=>(const Subgroup& other) const { return elements_ <=> other.elements_; }
  bool operator==(const Subgroup& other) const { return elements_ == other.elements_; }

 private:
  AbelianGroup parent_;
  std::vector<GroupElement> elements_;  // sorted, closed, contains zero
};

/// The cyclic subgroup <g> = {0, g, 2g, ...}.
Subgroup cyclic_subgroup(const AbelianGroup& g, const GroupElement& e);

/// All prime-order subgroups of H, pairwise trivially intersecting,
/// sorted canonically.
std::vector<Subgroup> sigma(const Subgroup& h);

/// All subgroups of g of prime order p, sorted canonically.
std::vector<Subgroup> order_p_subgroups(const AbelianGroup& g, std::int64_t p);

/// Explicit additive bijection between two isomorphic groups, composed of
/// CRT splits and a matching of primary components. Determined by the images
/// of the source unit vectors.
class Isomorphism {
 public:
  Isomorphism(AbelianGroup from, AbelianGroup to, std::vector<GroupElement> unit_images);

  const AbelianGroup& from() const { return from_; }
  const AbelianGroup& to() const { return to_; }
  GroupElement apply(const GroupElement& e) const;

 private:
  AbelianGroup from_;
  AbelianGroup to_;
  std::vector<GroupElement> unit_images_;
};

/// Returns an explicit isomorphism G -> H if the primary decompositions
/// match, otherwise nullopt.
std::optional<Isomorphism> isomorphism_to(const AbelianGroup& g, const AbelianGroup& h);

bool is_prime(std::int64_t n);

}  // namespace pyrsts
