#include "pyrsts/diff_matrix.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace pyrsts {

bool dm_exists(const AbelianGroup& k) {
  int even = 0;
  for (std::int64_t n : k.factors()) {
    if (n % 2 == 0) ++even;
  }
  return even != 1;
}

DmCheck verify_dm(const DifferenceMatrix& m) {
  DmCheck check;
  check.pass = true;
  const AbelianGroup& g = m.group;
  auto cols = static_cast<std::size_t>(g.order());
  for (const auto& row : m.rows) {
    if (row.size() != cols) {
      check.pass = false;
      check.problems.push_back("row length != |K|");
      return check;
    }
  }
  for (std::size_t r1 = 0; r1 < 3; ++r1) {
    for (std::size_t r2 = r1 + 1; r2 < 3; ++r2) {
      std::vector<char> seen(cols, 0);
      for (std::size_t j = 0; j < cols; ++j) {
        GroupElement d = g.sub(m.rows[r1][j], m.rows[r2][j]);
        auto key = static_cast<std::size_t>(g.pack(d));
        if (seen[key]) {
          check.pass = false;
          check.problems.push_back("rows " + std::to_string(r1) + "," + std::to_string(r2) +
                                   ": difference " + g.format_element(d) + " repeats");
        }
        seen[key] = 1;
      }
      for (std::size_t key = 0; key < cols; ++key) {
        if (!seen[key]) {
          check.pass = false;
          check.problems.push_back("rows " + std::to_string(r1) + "," + std::to_string(r2) +
                                   ": difference " + g.format_element(g.unpack(static_cast<std::int64_t>(key))) +
                                   " missing");
        }
      }
    }
  }
  return check;
}

std::string DmCheck::summary() const {
  if (pass) return "PASS";
  std::ostringstream os;
  os << "FAIL:";
  for (const auto& p : problems) os << ' ' << p << ';';
  return os.str();
}

DifferenceMatrix dm_product(const DifferenceMatrix& a, const DifferenceMatrix& b) {
  std::vector<std::int64_t> factors = a.group.factors();
  factors.insert(factors.end(), b.group.factors().begin(), b.group.factors().end());
  AbelianGroup g(std::move(factors));
  DifferenceMatrix out;
  out.group = g;
  auto an = static_cast<std::size_t>(a.group.order());
  auto bn = static_cast<std::size_t>(b.group.order());
  for (std::size_t r = 0; r < 3; ++r) {
    out.rows[r].reserve(an * bn);
    for (std::size_t i = 0; i < an; ++i) {
      for (std::size_t j = 0; j < bn; ++j) {
        GroupElement e;
        e.coords = a.rows[r][i].coords;
        e.coords.insert(e.coords.end(), b.rows[r][j].coords.begin(), b.rows[r][j].coords.end());
        out.rows[r].push_back(std::move(e));
      }
    }
  }
  return out;
}

namespace {

// Rows (0, x, z(x)) form a DM iff z is a bijection with z - id bijective.
// We search such a z with z(0) = 0 fixed; any solution can be translated
// into this normal form, so exhausting the tree proves nonexistence.
struct OrthoSolver {
  std::int64_t n;
  std::uint64_t max_nodes;
  std::uint64_t nodes = 0;
  bool budget_hit = false;
  std::vector<GroupElement> elems;
  std::vector<std::vector<std::int32_t>> diff;  // diff[x][y] = pack(elems[y] - elems[x])
  std::vector<char> used_val, used_diff;
  std::vector<std::int32_t> choice;

  bool extend(std::int64_t x) {
    if (x == n) return true;
    for (std::int64_t y = 0; y < n; ++y) {
      if (x == 0 && y > 0) break;  // z(0) = 0 normalization
      if (used_val[static_cast<std::size_t>(y)]) continue;
      std::int32_t d = diff[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)];
      if (used_diff[static_cast<std::size_t>(d)]) continue;
      if (++nodes > max_nodes) {
        budget_hit = true;
        return false;
      }
      used_val[static_cast<std::size_t>(y)] = 1;
      used_diff[static_cast<std::size_t>(d)] = 1;
      choice[static_cast<std::size_t>(x)] = static_cast<std::int32_t>(y);
      if (extend(x + 1)) return true;
      used_val[static_cast<std::size_t>(y)] = 0;
      used_diff[static_cast<std::size_t>(d)] = 0;
      if (budget_hit) return false;
    }
    return false;
  }
};

}  // namespace

DmSearch dm_search(const AbelianGroup& k, std::uint64_t max_nodes) {
  DmSearch result;
  std::int64_t n = k.order();
  OrthoSolver solver;
  solver.n = n;
  solver.max_nodes = max_nodes;
  solver.elems = k.elements();
  solver.diff.assign(static_cast<std::size_t>(n), std::vector<std::int32_t>(static_cast<std::size_t>(n)));
  for (std::int64_t x = 0; x < n; ++x) {
    for (std::int64_t y = 0; y < n; ++y) {
      solver.diff[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)] =
          static_cast<std::int32_t>(k.pack(k.sub(solver.elems[static_cast<std::size_t>(y)],
                                                 solver.elems[static_cast<std::size_t>(x)])));
    }
  }
  solver.used_val.assign(static_cast<std::size_t>(n), 0);
  solver.used_diff.assign(static_cast<std::size_t>(n), 0);
  solver.choice.assign(static_cast<std::size_t>(n), 0);

  bool found = solver.extend(0);
  result.nodes = solver.nodes;
  if (found) {
    DifferenceMatrix m;
    m.group = k;
    m.rows[0].assign(static_cast<std::size_t>(n), k.zero());
    m.rows[1] = solver.elems;
    for (std::int64_t x = 0; x < n; ++x) {
      m.rows[2].push_back(solver.elems[static_cast<std::size_t>(solver.choice[static_cast<std::size_t>(x)])]);
    }
    result.status = SearchStatus::kFound;
    result.dm = std::move(m);
  } else if (solver.budget_hit) {
    result.status = SearchStatus::kBudgetExceeded;
  } else {
    result.status = SearchStatus::kAbsent;
  }
  return result;
}

namespace {

DifferenceMatrix dm_trivial() {
  DifferenceMatrix m;
  m.group = AbelianGroup();
  for (auto& row : m.rows) row.assign(1, m.group.zero());
  return m;
}

DifferenceMatrix dm_odd(const AbelianGroup& k) {
  DifferenceMatrix m;
  m.group = k;
  for (const auto& g : k.elements()) {
    m.rows[0].push_back(k.zero());
    m.rows[1].push_back(g);
    m.rows[2].push_back(k.add(g, g));
  }
  return m;
}

// 2-groups: peel off a Z_2 x Z_2 slice while the remainder keeps rank >= 2,
// then search the remaining base directly. The only searched bases that
// arise from the dispatcher are Z_2^2, Z_2^3, Z_2xZ_4, Z_2^2xZ_4.
DifferenceMatrix dm_build_2group(const AbelianGroup& p, std::uint64_t max_nodes) {
  if (p.trivial()) return dm_trivial();
  if (p.rank() == 1) throw Error("no DM over a nontrivial cyclic 2-group");
  std::size_t twos = 0;
  for (std::int64_t n : p.factors()) {
    if (n == 2) ++twos;
  }
  if (p.rank() >= 4 && twos >= 2) {
    std::vector<std::int64_t> rest;
    int dropped = 0;
    for (std::int64_t n : p.factors()) {
      if (n == 2 && dropped < 2) {
        ++dropped;
      } else {
        rest.push_back(n);
      }
    }
    DifferenceMatrix head = dm_build_2group(AbelianGroup({2, 2}), max_nodes);
    DifferenceMatrix tail = dm_build_2group(AbelianGroup(rest), max_nodes);
    return dm_product(head, tail);
  }
  DmSearch s = dm_search(p, max_nodes);
  if (s.status == SearchStatus::kBudgetExceeded) {
    throw BudgetError("DM search budget exhausted for " + p.descriptor());
  }
  if (s.status == SearchStatus::kAbsent) {
    throw Error("no DM found for 2-group " + p.descriptor());  // cannot happen if noncyclic
  }
  return *s.dm;
}

}  // namespace

DifferenceMatrix dm_build(const AbelianGroup& k, std::uint64_t max_nodes) {
  if (!dm_exists(k)) {
    throw Error("no (K,3,1)-DM exists: Sylow 2-subgroup of " + k.descriptor() +
                " is nontrivial cyclic");
  }
  if (k.trivial()) return dm_trivial();
  if (k.order() % 2 != 0) return dm_odd(k);

  // Split into 2-part x odd part via the primary decomposition, build the
  // pieces, and transport the product back onto K's own coordinates.
  std::vector<std::int64_t> two_part, odd_part;
  for (std::int64_t q : k.primary_decomposition()) {
    (q % 2 == 0 ? two_part : odd_part).push_back(q);
  }
  AbelianGroup p(two_part);
  DifferenceMatrix m = dm_build_2group(p, max_nodes);
  if (!odd_part.empty()) {
    m = dm_product(m, dm_odd(AbelianGroup(odd_part)));
  }
  auto iso = isomorphism_to(m.group, k);
  if (!iso) throw Error("internal: primary split not isomorphic to K");
  DifferenceMatrix out;
  out.group = k;
  for (std::size_t r = 0; r < 3; ++r) {
    out.rows[r].reserve(m.rows[r].size());
    for (const auto& e : m.rows[r]) out.rows[r].push_back(iso->apply(e));
  }
  return out;
}

}  // namespace pyrsts
