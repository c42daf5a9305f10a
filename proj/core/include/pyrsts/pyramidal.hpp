#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pyrsts/constructions.hpp"
#include "pyrsts/diff_family.hpp"
#include "pyrsts/group.hpp"

namespace pyrsts {

/// Point of a pyramidal STS: either a group element or one of the f fixed
/// symbols, indexed by position in the ordered involution list.
struct PointRef {
  bool fixed = false;
  std::int32_t index = 0;  // valid when fixed
  GroupElement g;          // valid when !fixed

  auto operator<=>(const PointRef&) const = default;
};

enum class BlockTag : std::uint8_t { kBaseOrbit, kShortOrbit2, kShortOrbit3, kFixedLine };

struct SystemBlock {
  std::array<PointRef, 3> points;  // sorted
  BlockTag tag = BlockTag::kBaseOrbit;

  auto operator<=>(const SystemBlock& o) const { return points <=> o.points; }
  bool operator==(const SystemBlock& o) const { return points == o.points; }
};

struct TripleSystem {
  std::int64_t v = 0;
  std::int64_t f = 0;
  AbelianGroup group;
  std::vector<SystemBlock> blocks;  // sorted canonically
};

struct PyramidalCertificate {
  std::int64_t f = 0;
  std::int64_t v = 0;
  std::int64_t e = 0;  // order-3 spread members used
  std::string group_descriptor;
  bool sts_ok = false;
  bool automorphism_ok = false;
  bool fixed_count_ok = false;
  bool sharp_transitivity_ok = false;
  bool subsystem_ok = false;

  bool pass() const {
    return sts_ok && automorphism_ok && fixed_count_ok && sharp_transitivity_ok && subsystem_ok;
  }
};

struct PyramidalReport {
  PyramidalCertificate cert;
  std::vector<std::string> problems;
  std::string summary() const;
};

struct AdmissibleResult {
  bool ok = false;
  std::string reason;
};

/// Admissibility of (f, v) for a nontrivial f-pyramidal STS(v) over an
/// abelian group: f in {0,1,3} with their congruence spectra, or f = 2^m - 1
/// (m >= 3) with condition (a), (b) for even m, or (c) for odd m; in every
/// case v = 1,3 (mod 6) and f < v/2.
AdmissibleResult admissible(std::int64_t f, std::int64_t v);

/// Splits v - f = 2^(m+l) * d and assigns the case tag; requires
/// admissible(f, v) and f >= 7.
CaseDecomposition decompose(std::int64_t f, std::int64_t v);

/// Develops a verified difference family with spread type {2^f, 3^e} into a
/// full STS(|G| + f): base-block orbits, short orbits under the order-2 and
/// order-3 spread members, and the projective line set on the fixed points.
TripleSystem develop(const DifferenceFamily& df);

/// Machine verification of every defining property: exact pair coverage,
/// invariance under all translations, fixed point count, sharply transitive
/// action, and the fixed-point subsystem being an STS(f).
PyramidalReport verify_pyramidal(const TripleSystem& sys);

struct Constructed {
  TripleSystem system;
  PyramidalCertificate cert;
  std::string case_name;      // "A", "B-even", "B-odd", or "oracle"
  std::string group_descriptor;
  std::int64_t e = 0;
  std::int64_t block_count = 0;
};

/// End-to-end construction for admissible (f, v). f >= 7 goes through the
/// case dispatch; f in {0,1,3} is attempted with the search oracle over
/// candidate groups (best effort). Returns only fully verified systems.
Constructed construct(Workspace& ws, std::int64_t f, std::int64_t v);

/// Thrown by construct() when (f, v) is not admissible.
class InadmissibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace pyrsts
