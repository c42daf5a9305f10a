#include "pyrsts/sequences.hpp"

#include <algorithm>

namespace pyrsts {

bool is_langford_admissible(std::int64_t k, std::int64_t a, std::int64_t b) {
  if (k < 1 || a < 0 || b < 1 || k > 2 * a + 1) return false;
  if (!(a == 0 && k == 1) && !(2 * b - 1 <= a)) return false;
  bool b_odd = b % 2 != 0;
  bool k_odd = k % 2 != 0;
  std::int64_t a4 = a % 4;
  if (b_odd && k_odd) return a4 == 0 || a4 == 1;
  if (b_odd && !k_odd) return a4 == 2 || a4 == 3;
  if (!b_odd && k_odd) return a4 == 0 || a4 == 3;
  return a4 == 1 || a4 == 2;
}

bool langford_valid(const LangfordSequence& seq) {
  const auto [k, a, b] = std::tuple(seq.k, seq.a, seq.b);
  if (k < 1 || k > 2 * a + 1 || b < 1) return false;
  if (static_cast<std::int64_t>(seq.s.size()) != a) return false;
  std::vector<char> hit(static_cast<std::size_t>(2 * a + 2), 0);
  auto place = [&](std::int64_t p) {
    if (p < 1 || p > 2 * a + 1 || p == k || hit[static_cast<std::size_t>(p)]) return false;
    hit[static_cast<std::size_t>(p)] = 1;
    return true;
  };
  for (std::int64_t i = 1; i <= a; ++i) {
    std::int64_t si = seq.s[static_cast<std::size_t>(i - 1)];
    if (!place(si) || !place(si + i + b - 1)) return false;
  }
  return true;
}

namespace {

struct LangfordSolver {
  std::int64_t k, a, b;
  std::uint64_t max_nodes;
  std::uint64_t nodes = 0;
  bool budget_hit = false;
  std::vector<char> used;    // positions 1..2a+1
  std::vector<char> placed;  // values 1..a
  std::vector<std::int64_t> s;

  // The leftmost empty position is always the left endpoint of some value
  // that is still unplaced: its partner position would otherwise sit in the
  // filled prefix. Branch there, trying the largest difference first.
  bool place(std::int64_t remaining, std::int64_t scan_from) {
    if (remaining == 0) return true;
    std::int64_t p = scan_from;
    while (used[static_cast<std::size_t>(p)]) ++p;
    for (std::int64_t i = a; i >= 1; --i) {
      if (placed[static_cast<std::size_t>(i)]) continue;
      std::int64_t q = p + i + b - 1;
      if (q > 2 * a + 1 || used[static_cast<std::size_t>(q)]) continue;
      if (++nodes > max_nodes) {
        budget_hit = true;
        return false;
      }
      used[static_cast<std::size_t>(p)] = used[static_cast<std::size_t>(q)] = 1;
      placed[static_cast<std::size_t>(i)] = 1;
      s[static_cast<std::size_t>(i - 1)] = p;
      if (place(remaining - 1, p + 1)) return true;
      used[static_cast<std::size_t>(p)] = used[static_cast<std::size_t>(q)] = 0;
      placed[static_cast<std::size_t>(i)] = 0;
      if (budget_hit) return false;
    }
    return false;
  }
};

}  // namespace

LangfordSearch find_extended_langford(std::int64_t k, std::int64_t a, std::int64_t b,
                                      std::uint64_t max_nodes) {
  if (k < 1 || a < 0 || b < 1 || k > 2 * a + 1) {
    throw Error("invalid Langford parameters (k,a,b)=(" + std::to_string(k) + "," +
                std::to_string(a) + "," + std::to_string(b) + ")");
  }
  LangfordSolver solver{k, a, b, max_nodes};
  solver.used.assign(static_cast<std::size_t>(2 * a + 2), 0);
  solver.used[static_cast<std::size_t>(k)] = 1;
  solver.placed.assign(static_cast<std::size_t>(a + 1), 0);
  solver.s.assign(static_cast<std::size_t>(a), 0);

  LangfordSearch result;
  bool found = solver.place(a, 1);
  result.nodes = solver.nodes;
  if (found) {
    result.status = SearchStatus::kFound;
    result.seq = LangfordSequence{k, a, b, std::move(solver.s)};
  } else if (solver.budget_hit) {
    result.status = SearchStatus::kBudgetExceeded;
  } else {
    result.status = SearchStatus::kAbsent;
  }
  return result;
}

std::vector<std::array<std::int64_t, 3>> langford_triples(const LangfordSequence& seq) {
  if (!langford_valid(seq)) throw Error("langford_triples requires a valid sequence");
  std::vector<std::array<std::int64_t, 3>> out;
  out.reserve(static_cast<std::size_t>(seq.a));
  for (std::int64_t i = 1; i <= seq.a; ++i) {
    std::int64_t si = seq.s[static_cast<std::size_t>(i - 1)];
    out.push_back({0, si + seq.a + seq.b - 1, si + i + seq.a + 2 * (seq.b - 1)});
  }
  return out;
}

}  // namespace pyrsts
