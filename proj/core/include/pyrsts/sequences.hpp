#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pyrsts/group.hpp"

namespace pyrsts {

enum class SearchStatus { kFound, kAbsent, kBudgetExceeded };

/// k-extended Langford sequence of order a and defect b: a positive integers
/// s_1..s_a with {s_i, s_i + i + (b-1)} = [1, 2a+1] \ {k}. Defect 1 is the
/// extended Skolem case.
struct LangfordSequence {
  std::int64_t k = 1;
  std::int64_t a = 0;
  std::int64_t b = 1;
  std::vector<std::int64_t> s;
};

/// Parity/congruence test for the existence of a k-extended Langford sequence
/// of order a and defect b.
bool is_langford_admissible(std::int64_t k, std::int64_t a, std::int64_t b);

/// Checks the defining set identity.
bool langford_valid(const LangfordSequence& seq);

inline constexpr std::uint64_t kDefaultLangfordBudget = 100'000'000;

struct LangfordSearch {
  SearchStatus status = SearchStatus::kAbsent;
  LangfordSequence seq;
  std::uint64_t nodes = 0;
};

/// Exhaustive backtracking, placing the largest differences first with
/// first-fit positions, so results are deterministic. kAbsent is only
/// returned when the whole tree was exhausted.
LangfordSearch find_extended_langford(std::int64_t k, std::int64_t a, std::int64_t b,
                                      std::uint64_t max_nodes = kDefaultLangfordBudget);

/// Derives a integer triples, each with least element 0, whose difference
/// list is +-([b, 3a+b] \ {k+a+b-1}). The caller maps the integers into a
/// cyclic coordinate of a group.
std::vector<std::array<std::int64_t, 3>> langford_triples(const LangfordSequence& seq);

}  // namespace pyrsts
