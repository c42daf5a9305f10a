#include "pyrsts/pyramidal.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

namespace pyrsts {

namespace {

constexpr std::int64_t kMaxDevelopOrder = 4096;          // full translation checks
constexpr std::int64_t kMaxDevelopV = 2500;              // block storage guard

bool is_pow2_minus1(std::int64_t f, std::int64_t* m_out) {
  std::int64_t n = f + 1;
  if (n < 2 || (n & (n - 1)) != 0) return false;
  std::int64_t m = 0;
  while ((std::int64_t(1) << m) < n) ++m;
  if (m_out) *m_out = m;
  return true;
}

std::int64_t pow2(std::int64_t e) { return std::int64_t(1) << e; }

}  // namespace

AdmissibleResult admissible(std::int64_t f, std::int64_t v) {
  if (v < 1) return {false, "v must be positive"};
  if (f < 0) return {false, "f must be nonnegative"};
  if (f > 0 && f % 6 != 1 && f % 6 != 3) {
    return {false, "f = " + std::to_string(f) + " is not 0 and not 1,3 (mod 6)"};
  }
  std::int64_t m = 0;
  if (f > 3 && !is_pow2_minus1(f, &m)) {
    return {false, "f = " + std::to_string(f) +
                       " is not of the form 2^m - 1 required over abelian groups"};
  }
  if (v % 6 != 1 && v % 6 != 3) {
    return {false, "v = " + std::to_string(v) + " is not 1,3 (mod 6)"};
  }
  if (2 * f >= v) return {false, "requires f < v/2"};

  if (f == 0) return {true, "admissible: f=0, v = 1,3 (mod 6)"};
  if (f == 1) {
    if (v % 24 == 3 || v % 24 == 9 || v % 72 == 1 || v % 72 == 19) {
      return {true, "admissible: f=1 spectrum (v = 3,9 (mod 24) or 1,19 (mod 72))"};
    }
    return {false, "v not in the f=1 spectrum: v != 3,9 (mod 24) and v != 1,19 (mod 72)"};
  }
  if (f == 3) {
    if (v % 24 == 7 || v % 24 == 15 || v % 48 == 3 || v % 48 == 19) {
      return {true, "admissible: f=3 spectrum (v = 7,15 (mod 24) or 3,19 (mod 48))"};
    }
    return {false, "v not in the f=3 spectrum: v != 7,15 (mod 24) and v != 3,19 (mod 48)"};
  }

  is_pow2_minus1(f, &m);
  std::int64_t mod_a = pow2(m) * 3;
  if (v % mod_a == (pow2(m + 1) - 1) % mod_a) {
    return {true, "admissible: condition (a), m=" + std::to_string(m)};
  }
  if (m % 2 == 0) {
    if (v % mod_a == pow2(m) - 1) {
      return {true, "admissible: condition (b), m=" + std::to_string(m)};
    }
    return {false, "v fails conditions (a) and (b) for m=" + std::to_string(m) + ": v != " +
                       std::to_string(pow2(m + 1) - 1) + "," + std::to_string(pow2(m) - 1) +
                       " (mod " + std::to_string(mod_a) + ")"};
  }
  std::int64_t mod_c = pow2(m) * 9;
  if (v % mod_c == pow2(m) - 1) {
    return {true, "admissible: condition (c), m=" + std::to_string(m)};
  }
  return {false, "v fails conditions (a) and (c) for m=" + std::to_string(m) + ": v != " +
                     std::to_string(pow2(m + 1) - 1) + " (mod " + std::to_string(mod_a) +
                     ") and v != " + std::to_string(pow2(m) - 1) + " (mod " +
                     std::to_string(mod_c) + ")"};
}

CaseDecomposition decompose(std::int64_t f, std::int64_t v) {
  AdmissibleResult adm = admissible(f, v);
  if (!adm.ok) throw InadmissibleError(adm.reason);
  if (f < 7) throw Error("decompose applies to f >= 7");
  CaseDecomposition dec;
  dec.f = f;
  dec.v = v;
  is_pow2_minus1(f, &dec.m);
  std::int64_t n = v - f;
  std::int64_t val2 = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++val2;
  }
  dec.ell = val2 - dec.m;
  dec.d = n;
  if (dec.ell < 0) throw VerifyError("2-adic valuation of v-f is below m");  // unreachable
  std::int64_t want_a = dec.ell % 2 == 0 ? 1 : 5;
  if (dec.d % 6 == want_a) {
    dec.tag = CaseTag::kA;
    dec.e_expected = 0;
  } else if (dec.d % 6 == 3 && dec.m % 2 == 0) {
    dec.tag = CaseTag::kBEven;
    dec.e_expected = 1;
  } else if (dec.d % 18 == 9 && dec.m % 2 == 1) {
    dec.tag = CaseTag::kBOdd;
    dec.e_expected = 2;
  } else {
    throw VerifyError("admissible pair has no case decomposition");  // unreachable
  }
  return dec;
}

namespace {

std::array<std::int64_t, 3> block_code(const AbelianGroup& g, std::int64_t f,
                                       const SystemBlock& b) {
  std::array<std::int64_t, 3> code{};
  for (std::size_t i = 0; i < 3; ++i) {
    code[i] = b.points[i].fixed ? b.points[i].index
                                : f + g.pack(b.points[i].g);
  }
  std::sort(code.begin(), code.end());
  return code;
}

struct CodeHash {
  std::size_t operator()(const std::array<std::int64_t, 3>& c) const {
    std::size_t h = 1469598103934665603ull;
    for (auto v : c) {
      h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return h;
  }
};

}  // namespace

TripleSystem develop(const DifferenceFamily& df) {
  auto check = verify_relative_df(df);
  if (!check.pass) throw VerifyError("develop: difference family fails verification: " + check.summary());
  SpreadType type = spread_type(df.spread);
  if (!type.clean()) throw Error("develop: spread members must have order 2 or 3");

  const AbelianGroup& g = df.group;
  std::vector<GroupElement> inv = involutions(g);
  std::vector<GroupElement> spread_inv;
  std::vector<const Subgroup*> thirds;
  for (const auto& s : df.spread.members) {
    if (s.order() == 2) spread_inv.push_back(s.elements()[1]);
    if (s.order() == 3) thirds.push_back(&s);
  }
  std::sort(spread_inv.begin(), spread_inv.end());
  if (spread_inv != inv) {
    throw Error("develop: order-2 spread members must biject with the involutions of G");
  }

  std::int64_t f = static_cast<std::int64_t>(inv.size());
  std::int64_t v = g.order() + f;
  if (g.order() > kMaxDevelopOrder || v > kMaxDevelopV) {
    throw Error("develop: instance too large for desk-scale verification");
  }

  std::map<GroupElement, std::int32_t> fixed_index;
  for (std::size_t i = 0; i < inv.size(); ++i) {
    fixed_index[inv[i]] = static_cast<std::int32_t>(i);
  }

  auto gp = [&](const GroupElement& e) { return PointRef{false, 0, e}; };
  auto fp = [&](std::int32_t i) { return PointRef{true, i, GroupElement{}}; };
  auto make_block = [&](PointRef a, PointRef b, PointRef c, BlockTag tag) {
    SystemBlock blk{{std::move(a), std::move(b), std::move(c)}, tag};
    std::sort(blk.points.begin(), blk.points.end());
    return blk;
  };

  TripleSystem sys;
  sys.v = v;
  sys.f = f;
  sys.group = g;
  std::vector<GroupElement> all = g.elements();

  // (i) full orbits of the base blocks
  for (const auto& t : df.base_blocks) {
    for (const auto& x : all) {
      sys.blocks.push_back(make_block(gp(g.add(t.points[0], x)), gp(g.add(t.points[1], x)),
                                      gp(g.add(t.points[2], x)), BlockTag::kBaseOrbit));
    }
  }
  // (ii) short orbits through the fixed points, one block per coset of {0,s}
  for (std::size_t i = 0; i < inv.size(); ++i) {
    const GroupElement& s = inv[i];
    for (const auto& x : all) {
      GroupElement y = g.add(x, s);
      if (x < y) {
        sys.blocks.push_back(make_block(fp(static_cast<std::int32_t>(i)), gp(x), gp(y),
                                        BlockTag::kShortOrbit2));
      }
    }
  }
  // (iii) one block per coset of each order-3 member
  for (const Subgroup* third : thirds) {
    const GroupElement& s = third->elements()[1];
    GroupElement s2 = g.add(s, s);
    for (const auto& x : all) {
      GroupElement y = g.add(x, s);
      GroupElement z = g.add(x, s2);
      if (x < y && x < z) {
        sys.blocks.push_back(make_block(gp(x), gp(y), gp(z), BlockTag::kShortOrbit3));
      }
    }
  }
  // (iv) lines of the projective space on the involutions
  if (f >= 3) {
    for (std::size_t i = 0; i < inv.size(); ++i) {
      for (std::size_t j = i + 1; j < inv.size(); ++j) {
        GroupElement sum = g.add(inv[i], inv[j]);
        std::int32_t kk = fixed_index.at(sum);
        if (kk > static_cast<std::int32_t>(j)) {
          sys.blocks.push_back(make_block(fp(static_cast<std::int32_t>(i)),
                                          fp(static_cast<std::int32_t>(j)), fp(kk),
                                          BlockTag::kFixedLine));
        }
      }
    }
  }

  std::unordered_set<std::array<std::int64_t, 3>, CodeHash> seen;
  seen.reserve(sys.blocks.size() * 2);
  for (const auto& b : sys.blocks) {
    if (!seen.insert(block_code(g, f, b)).second) {
      throw VerifyError("develop: duplicate block produced");
    }
  }
  if (static_cast<std::int64_t>(sys.blocks.size()) != v * (v - 1) / 6) {
    throw VerifyError("develop: block count " + std::to_string(sys.blocks.size()) +
                      " != v(v-1)/6 = " + std::to_string(v * (v - 1) / 6));
  }
  std::sort(sys.blocks.begin(), sys.blocks.end());
  return sys;
}

std::string PyramidalReport::summary() const {
  if (cert.pass()) return "PASS";
  std::ostringstream os;
  os << "FAIL:";
  for (const auto& p : problems) os << ' ' << p << ';';
  return os.str();
}

PyramidalReport verify_pyramidal(const TripleSystem& sys) {
  PyramidalReport rep;
  rep.cert.f = sys.f;
  rep.cert.v = sys.v;
  rep.cert.group_descriptor = sys.group.descriptor();
  const AbelianGroup& g = sys.group;
  std::int64_t f = sys.f;
  std::int64_t v = sys.v;
  auto note = [&rep](const std::string& msg) {
    if (rep.problems.size() < 32) rep.problems.push_back(msg);
  };

  if (v < 1 || f < 0 || v > kMaxDevelopV + 64) {
    note("size out of verifiable range");
    return rep;
  }

  // point indexing: fixed i -> i, group x -> f + pack(x)
  auto point_code = [&](const PointRef& p) -> std::int64_t {
    if (p.fixed) return p.index;
    return f + g.pack(p.g);
  };

  // (3) fixed point labels
  rep.cert.fixed_count_ok = true;
  std::set<std::int32_t> fixed_seen;
  for (const auto& b : sys.blocks) {
    for (const auto& p : b.points) {
      if (p.fixed) {
        if (p.index < 0 || p.index >= f) {
          rep.cert.fixed_count_ok = false;
          note("fixed point index out of range");
        } else {
          fixed_seen.insert(p.index);
        }
      } else if (!g.shape_ok(p.g)) {
        rep.cert.fixed_count_ok = false;
        note("group point outside the group");
      }
    }
  }
  if (v > 1 && static_cast<std::int64_t>(fixed_seen.size()) != f) {
    rep.cert.fixed_count_ok = false;
    note("not all " + std::to_string(f) + " fixed points occur");
  }

  // (1) exact pair coverage
  rep.cert.sts_ok = true;
  if (static_cast<std::int64_t>(sys.blocks.size()) != v * (v - 1) / 6) {
    rep.cert.sts_ok = false;
    note("block count " + std::to_string(sys.blocks.size()) + " != v(v-1)/6");
  }
  std::vector<std::uint8_t> pair_count(static_cast<std::size_t>(v * v), 0);
  auto pair_at = [&](std::int64_t a, std::int64_t b) -> std::uint8_t& {
    if (a > b) std::swap(a, b);
    return pair_count[static_cast<std::size_t>(a * v + b)];
  };
  for (const auto& b : sys.blocks) {
    std::array<std::int64_t, 3> code{point_code(b.points[0]), point_code(b.points[1]),
                                     point_code(b.points[2])};
    if (code[0] == code[1] || code[1] == code[2] || code[0] == code[2]) {
      rep.cert.sts_ok = false;
      note("block with repeated point");
      continue;
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        auto& c = pair_at(code[i], code[j]);
        if (c < 255) ++c;
      }
    }
  }
  auto point_name = [&](std::int64_t code) -> std::string {
    if (code < f) return "F" + std::to_string(code);
    return "G" + g.format_element(g.unpack(code - f));
  };
  for (std::int64_t a = 0; a < v && rep.problems.size() < 24; ++a) {
    for (std::int64_t b = a + 1; b < v; ++b) {
      std::uint8_t c = pair_at(a, b);
      if (c != 1) {
        rep.cert.sts_ok = false;
        note("pair {" + point_name(a) + "," + point_name(b) + "} covered " + std::to_string(c) +
             " times");
        if (rep.problems.size() >= 24) break;
      }
    }
  }

  // (2) every translation maps the block set onto itself
  rep.cert.automorphism_ok = true;
  {
    std::unordered_set<std::array<std::int64_t, 3>, CodeHash> block_set;
    block_set.reserve(sys.blocks.size() * 2);
    for (const auto& b : sys.blocks) block_set.insert(block_code(g, f, b));

    std::vector<GroupElement> translations;
    if (g.order() <= kMaxDevelopOrder) {
      translations = g.elements();
    } else {
      auto all = g.elements();
      for (std::size_t i = 0; i < all.size(); i += std::max<std::size_t>(1, all.size() / 64)) {
        translations.push_back(all[i]);
      }
    }
    for (const auto& t : translations) {
      for (const auto& b : sys.blocks) {
        std::array<std::int64_t, 3> code{};
        for (std::size_t i = 0; i < 3; ++i) {
          code[i] = b.points[i].fixed ? b.points[i].index
                                      : f + g.pack(g.add(b.points[i].g, t));
        }
        std::sort(code.begin(), code.end());
        if (!block_set.count(code)) {
          rep.cert.automorphism_ok = false;
          note("translation by " + g.format_element(t) + " does not preserve the block set");
          break;
        }
      }
      if (!rep.cert.automorphism_ok) break;
    }
  }

  // (4) sharply transitive: the regular action needs |G| = v - f
  rep.cert.sharp_transitivity_ok = g.order() == v - f;
  if (!rep.cert.sharp_transitivity_ok) note("|G| != v - f");

  // (5) blocks inside the fixed points form an STS(f)
  rep.cert.subsystem_ok = true;
  std::int64_t fixed_blocks = 0;
  std::vector<std::uint8_t> fixed_pairs(static_cast<std::size_t>(std::max<std::int64_t>(1, f * f)), 0);
  for (const auto& b : sys.blocks) {
    if (b.points[0].fixed && b.points[1].fixed && b.points[2].fixed) {
      ++fixed_blocks;
      std::array<std::int64_t, 3> idx{b.points[0].index, b.points[1].index, b.points[2].index};
      for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
          std::int64_t x = std::min(idx[i], idx[j]), y = std::max(idx[i], idx[j]);
          auto& c = fixed_pairs[static_cast<std::size_t>(x * f + y)];
          if (c < 255) ++c;
        }
      }
    }
  }
  std::int64_t expect_fixed = f >= 3 ? f * (f - 1) / 6 : 0;
  if (fixed_blocks != expect_fixed) {
    rep.cert.subsystem_ok = false;
    note("fixed-only block count " + std::to_string(fixed_blocks) + " != " +
         std::to_string(expect_fixed));
  }
  if (f >= 3) {
    for (std::int64_t a = 0; a < f; ++a) {
      for (std::int64_t b = a + 1; b < f; ++b) {
        if (fixed_pairs[static_cast<std::size_t>(a * f + b)] != 1) {
          rep.cert.subsystem_ok = false;
          note("fixed pair {F" + std::to_string(a) + ",F" + std::to_string(b) +
               "} not covered exactly once");
        }
      }
    }
  }

  // derive e: blocks that are cosets of order-3 subgroups
  std::int64_t coset3 = 0;
  for (const auto& b : sys.blocks) {
    if (b.points[0].fixed || b.points[1].fixed || b.points[2].fixed) continue;
    GroupElement d1 = g.sub(b.points[1].g, b.points[0].g);
    if (g.element_order(d1) != 3) continue;
    if (g.add(b.points[1].g, d1) == b.points[2].g) ++coset3;
  }
  rep.cert.e = g.order() > 0 && g.order() % 3 == 0 ? coset3 / (g.order() / 3) : 0;

  return rep;
}

namespace {

// All abelian groups of order n as factor lists (primary decompositions),
// deterministic order.
void exponent_partitions(std::int64_t a, std::vector<std::vector<std::int64_t>>& out) {
  // partitions of a in decreasing part order
  std::vector<std::int64_t> cur;
  std::function<void(std::int64_t, std::int64_t)> rec = [&](std::int64_t left, std::int64_t maxp) {
    if (left == 0) {
      out.push_back(cur);
      return;
    }
    for (std::int64_t p = std::min(left, maxp); p >= 1; --p) {
      cur.push_back(p);
      rec(left - p, p);
      cur.pop_back();
    }
  };
  rec(a, a);
}

std::vector<AbelianGroup> abelian_groups_of_order(std::int64_t n) {
  std::vector<std::pair<std::int64_t, std::int64_t>> primes;  // (p, exponent)
  std::int64_t rest = n;
  for (std::int64_t p = 2; p * p <= rest; ++p) {
    if (rest % p == 0) {
      std::int64_t e = 0;
      while (rest % p == 0) {
        rest /= p;
        ++e;
      }
      primes.emplace_back(p, e);
    }
  }
  if (rest > 1) primes.emplace_back(rest, 1);

  std::vector<std::vector<std::int64_t>> lists{{}};
  for (auto [p, e] : primes) {
    std::vector<std::vector<std::int64_t>> parts;
    exponent_partitions(e, parts);
    std::vector<std::vector<std::int64_t>> next;
    for (const auto& base : lists) {
      for (const auto& part : parts) {
        auto ext = base;
        for (std::int64_t a : part) {
          std::int64_t q = 1;
          for (std::int64_t i = 0; i < a; ++i) q *= p;
          ext.push_back(q);
        }
        next.push_back(std::move(ext));
      }
    }
    lists = std::move(next);
  }
  std::vector<AbelianGroup> out;
  for (auto& factors : lists) {
    std::sort(factors.begin(), factors.end());
    out.emplace_back(factors);
  }
  std::sort(out.begin(), out.end(), [](const AbelianGroup& a, const AbelianGroup& b) {
    if (a.rank() != b.rank()) return a.rank() < b.rank();
    return a.factors() < b.factors();
  });
  return out;
}

Constructed finish(const DifferenceFamily& df, const std::string& case_name) {
  TripleSystem sys = develop(df);
  PyramidalReport rep = verify_pyramidal(sys);
  SpreadType type = spread_type(df.spread);
  if (!rep.cert.pass()) {
    throw VerifyError(
        "verified difference family developed into a system that fails verification; "
        "this must be reported: " + rep.summary());
  }
  Constructed out;
  out.system = std::move(sys);
  out.cert = rep.cert;
  out.cert.e = type.order3;
  out.case_name = case_name;
  out.group_descriptor = df.group.descriptor();
  out.e = type.order3;
  out.block_count = static_cast<std::int64_t>(out.system.blocks.size());
  return out;
}

void size_e_subsets(std::size_t n, std::size_t e, std::size_t cap,
                    std::vector<std::vector<std::size_t>>& out) {
  std::vector<std::size_t> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    if (out.size() >= cap) return;
    if (cur.size() == e) {
      out.push_back(cur);
      return;
    }
    for (std::size_t i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
      if (out.size() >= cap) return;
    }
  };
  rec(0);
}

Constructed construct_small_f(Workspace& ws, std::int64_t f, std::int64_t v) {
  std::int64_t n = v - f;
  bool budget_hit = false;
  for (const auto& g : abelian_groups_of_order(n)) {
    if (static_cast<std::int64_t>(involutions(g).size()) != f) continue;
    std::vector<Subgroup> base;
    for (const auto& s : involutions(g)) base.push_back(cyclic_subgroup(g, s));
    std::vector<Subgroup> thirds = order_p_subgroups(g, 3);
    // smallest e making |G| - 1 - f - 2e divisible by 6, plus one more class
    std::int64_t e0 = -1;
    for (std::int64_t e = 0; e <= 2; ++e) {
      if (n - 1 - f - 2 * e >= 0 && (n - 1 - f - 2 * e) % 6 == 0) {
        e0 = e;
        break;
      }
    }
    if (e0 < 0) continue;
    for (std::int64_t e : {e0, e0 + 3}) {
      if (e > static_cast<std::int64_t>(thirds.size()) || n - 1 - f - 2 * e < 0) continue;
      std::vector<std::vector<std::size_t>> picks;
      size_e_subsets(thirds.size(), static_cast<std::size_t>(e), 64, picks);
      for (const auto& pick : picks) {
        PartialSpread spread{base};
        for (auto i : pick) spread.members.push_back(thirds[i]);
        auto solved = solve_relative_df(g, spread, ws.options().solver_budget);
        if (solved.status == SearchStatus::kFound) return finish(*solved.df, "oracle");
        if (solved.status == SearchStatus::kBudgetExceeded) budget_hit = true;
      }
    }
  }
  if (budget_hit) {
    throw BudgetError("oracle budget exhausted for f=" + std::to_string(f) +
                      ", v=" + std::to_string(v));
  }
  throw Error("no construction found for f=" + std::to_string(f) + ", v=" + std::to_string(v) +
              " (the f <= 3 path is best-effort)");
}

}  // namespace

Constructed construct(Workspace& ws, std::int64_t f, std::int64_t v) {
  AdmissibleResult adm = admissible(f, v);
  if (!adm.ok) throw InadmissibleError(adm.reason);
  if (f >= 7) {
    CaseDecomposition dec = decompose(f, v);
    DifferenceFamily df = build_df(ws, dec);
    Constructed out = finish(df, to_string(dec.tag));
    if (out.e != dec.e_expected) {
      throw VerifyError("constructed e does not match the case decomposition");
    }
    return out;
  }
  return construct_small_f(ws, f, v);
}

}  // namespace pyrsts
