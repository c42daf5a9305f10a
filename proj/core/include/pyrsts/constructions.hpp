#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "pyrsts/diff_family.hpp"
#include "pyrsts/diff_matrix.hpp"
#include "pyrsts/group.hpp"
#include "pyrsts/sequences.hpp"

namespace pyrsts {

enum class CaseTag { kA, kBEven, kBOdd };

std::string to_string(CaseTag tag);

/// Writes v - f = 2^(m+l) * d with d odd, where f = 2^m - 1. The tag records
/// which of the three congruence regimes d falls into; e_expected is the
/// number of order-3 spread members the construction will use.
struct CaseDecomposition {
  std::int64_t f = 0;
  std::int64_t v = 0;
  std::int64_t m = 0;
  std::int64_t ell = 0;
  std::int64_t d = 1;
  CaseTag tag = CaseTag::kA;
  std::int64_t e_expected = 0;
};

/// Ingredient difference families obtained through the search oracle.
/// Parameters follow the classical statements:
///   kCyclic1Mod6(v):  (Z_v, 3, 1)-DF, v = 1 (mod 6)
///   kCyclic3Mod6(v):  (Z_v, Z_3, 3, 1)-DF, v = 3 (mod 6); v = 9 uses Z_3^2
///   kCyclicRel2(v):   (Z_v, Z_2, 3, 1)-DF, v = 2,8 (mod 24)
///   kZ3xZ6n(n):       (Z_3 x Z_6n, {2,3^2}, 3, 1)-DF, n = 0,1 (mod 4)
///   kZ4xZ12n(n):      (Z_4 x Z_12n, {2^3,3}, 3, 1)-DF, n >= 1
///   kZ2x2xOdd(n):     (Z_2^2 x Z_{6n+3}, {2^3,3}, 3, 1)-DF, n >= 0
enum class IngredientKind {
  kCyclic1Mod6,
  kCyclic3Mod6,
  kCyclicRel2,
  kZ3xZ6n,
  kZ4xZ12n,
  kZ2x2xOdd,
};

std::string to_string(IngredientKind kind);

inline constexpr std::uint64_t kDefaultSolverBudget = 400'000'000;

struct BuildOptions {
  std::uint64_t solver_budget = kDefaultSolverBudget;
  std::uint64_t langford_budget = kDefaultLangfordBudget;
  std::uint64_t dm_budget = kDefaultDmBudget;
};

/// Optional on-disk cache: one JSON file per key inside a directory.
class DiskCache {
 public:
  DiskCache() = default;
  explicit DiskCache(std::filesystem::path dir);

  bool enabled() const { return !dir_.empty(); }
  std::optional<std::string> load(const std::string& key) const;
  void store(const std::string& key, const std::string& payload) const;

 private:
  std::filesystem::path dir_;
};

/// Shared services for the constructors: memoized Langford sequences,
/// difference matrices and ingredient families, plus the optional disk
/// cache. Thread safe; all returned values are immutable.
class Workspace {
 public:
  Workspace();
  explicit Workspace(BuildOptions options, DiskCache disk = DiskCache());

  const BuildOptions& options() const { return options_; }

  /// Memoized, guaranteed-existence lookup. Throws if the parameters are not
  /// Langford admissible or the budget runs out.
  LangfordSequence langford(std::int64_t k, std::int64_t a, std::int64_t b);

  /// Every (k, a, b) ever requested through langford(), in request order.
  std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>> langford_requests() const;

  /// Memoized dm_build.
  DifferenceMatrix dm(const AbelianGroup& k);

  /// Memoized, verified ingredient family (cached on disk when enabled).
  DifferenceFamily ingredient(IngredientKind kind, std::int64_t param);

 private:
  BuildOptions options_;
  DiskCache disk_;
  mutable std::mutex mutex_;
  std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t>, LangfordSequence> langford_memo_;
  std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>> langford_log_;
  std::map<std::string, DifferenceMatrix> dm_memo_;
  std::map<std::string, DifferenceFamily> df_memo_;
};

struct DfSolve {
  SearchStatus status = SearchStatus::kAbsent;
  std::optional<DifferenceFamily> df;
  std::uint64_t nodes = 0;
};

/// Exhaustive backtracking for a (G, Sigma, 3, 1)-DF relative to the given
/// spread: difference classes are covered largest element order first, each
/// base block normalized to contain 0; deterministic. kAbsent is a proof.
DfSolve solve_relative_df(const AbelianGroup& g, const PartialSpread& spread,
                          std::uint64_t max_nodes = kDefaultSolverBudget);

/// Classical composition: blocks of df spread over the columns of a
/// (K,3,1)-DM give a DF over H x K whose spread members are S x K.
DifferenceFamily expand_by_dm(const DifferenceFamily& df, const DifferenceMatrix& m);

DifferenceFamily ingredient_df(Workspace& ws, IngredientKind kind, std::int64_t param);

/// Explicit-table families. Names state the group they cover; every output
/// is re-verified before being returned.
DifferenceFamily df_over_z2x2_z4d(Workspace& ws, std::int64_t d);   // rel Z_2^3, d = 5 (mod 6)
DifferenceFamily df_over_z2x3_z4d(Workspace& ws, std::int64_t d);   // rel Z_2^4, d = 5 (mod 6)
DifferenceFamily df_over_z2x3_z12();                                // rel {2^15, 3}
DifferenceFamily df_over_z2x3_z3x2();                               // rel {2^7, 3^2}
DifferenceFamily df_over_z2x2_z3_z12();                             // rel {2^7, 3^2}

/// Inductive chains over Z_2^(x-1) x Z_{2^y} x Z_3 (e = 1, x even >= 2y) and
/// Z_2^(x-1) x Z_{2^y} x Z_3^2 (e = 2, x odd >= 3), y in {1, 2}.
DifferenceFamily df_chain_e1(Workspace& ws, std::int64_t x, std::int64_t y);
DifferenceFamily df_chain_e2(Workspace& ws, std::int64_t x, std::int64_t y);

/// Case builders: verified DF over an abelian group of order 2^(m+l) * d
/// with exactly 2^m - 1 involutions and spread type {2^f, 3^e}.
DifferenceFamily build_case_a(Workspace& ws, std::int64_t m, std::int64_t ell, std::int64_t d);
DifferenceFamily build_case_b_even(Workspace& ws, std::int64_t m, std::int64_t ell, std::int64_t d);
DifferenceFamily build_case_b_odd(Workspace& ws, std::int64_t m, std::int64_t ell, std::int64_t d);

DifferenceFamily build_df(Workspace& ws, const CaseDecomposition& dec);

}  // namespace pyrsts
