#include "pyrsts/constructions.hpp"

#include <algorithm>
#include <cassert>
#include <fstream>
#include <sstream>

#include "pyrsts/json_io.hpp"

namespace pyrsts {

std::string to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::kA: return "A";
    case CaseTag::kBEven: return "B-even";
    case CaseTag::kBOdd: return "B-odd";
  }
  return "?";
}

std::string to_string(IngredientKind kind) {
  switch (kind) {
    case IngredientKind::kCyclic1Mod6: return "cyclic-1mod6";
    case IngredientKind::kCyclic3Mod6: return "cyclic-3mod6";
    case IngredientKind::kCyclicRel2: return "cyclic-rel2";
    case IngredientKind::kZ3xZ6n: return "z3xz6n";
    case IngredientKind::kZ4xZ12n: return "z4xz12n";
    case IngredientKind::kZ2x2xOdd: return "z2x2xodd";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Disk cache
// ---------------------------------------------------------------------------

DiskCache::DiskCache(std::filesystem::path dir) : dir_(std::move(dir)) {
  if (!dir_.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw Error("cannot create cache directory " + dir_.string());
  }
}

std::optional<std::string> DiskCache::load(const std::string& key) const {
  if (!enabled()) return std::nullopt;
  std::ifstream in(dir_ / (key + ".json"));
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void DiskCache::store(const std::string& key, const std::string& payload) const {
  if (!enabled()) return;
  auto path = dir_ / (key + ".json");
  auto tmp = dir_ / (key + ".json.tmp");
  {
    std::ofstream out(tmp);
    out << payload;
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
}

// ---------------------------------------------------------------------------
// Relative difference family solver
// ---------------------------------------------------------------------------

namespace {

constexpr std::int64_t kSolverGroupLimit = 2048;

struct DfSolver {
  const AbelianGroup& g;
  std::int64_t n;
  std::uint64_t max_nodes;
  std::uint64_t nodes = 0;
  bool budget_hit = false;
  std::vector<std::int32_t> neg;
  std::vector<std::int32_t> subtab;  // subtab[a*n+b] = pack(a - b)
  std::vector<char> covered;
  std::vector<std::int32_t> priority;  // selection order for uncovered classes
  std::int64_t remaining = 0;
  std::vector<std::pair<std::int32_t, std::int32_t>> chosen;

  explicit DfSolver(const AbelianGroup& group, std::uint64_t budget)
      : g(group), n(group.order()), max_nodes(budget) {
    auto elems = g.elements();
    neg.resize(static_cast<std::size_t>(n));
    subtab.resize(static_cast<std::size_t>(n * n));
    for (std::int64_t a = 0; a < n; ++a) {
      neg[static_cast<std::size_t>(a)] =
          static_cast<std::int32_t>(g.pack(g.neg(elems[static_cast<std::size_t>(a)])));
      for (std::int64_t b = 0; b < n; ++b) {
        subtab[static_cast<std::size_t>(a * n + b)] = static_cast<std::int32_t>(
            g.pack(g.sub(elems[static_cast<std::size_t>(a)], elems[static_cast<std::size_t>(b)])));
      }
    }
    // Cover classes of high element order first; ties in packed order.
    priority.resize(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k) priority[static_cast<std::size_t>(k)] = static_cast<std::int32_t>(k);
    std::vector<std::int64_t> ord(static_cast<std::size_t>(n));
    for (std::int64_t k = 0; k < n; ++k) {
      ord[static_cast<std::size_t>(k)] = g.element_order(elems[static_cast<std::size_t>(k)]);
    }
    std::stable_sort(priority.begin(), priority.end(),
                     [&](std::int32_t a, std::int32_t b) {
                       return ord[static_cast<std::size_t>(a)] > ord[static_cast<std::size_t>(b)];
                     });
  }

  std::int32_t sub(std::int32_t a, std::int32_t b) const {
    return subtab[static_cast<std::size_t>(static_cast<std::int64_t>(a) * n + b)];
  }

  bool solve(std::size_t scan_from) {
    if (remaining == 0) return true;
    std::size_t idx = scan_from;
    while (covered[static_cast<std::size_t>(priority[idx])]) ++idx;
    std::int32_t d0 = priority[idx];
    std::int32_t d0n = neg[static_cast<std::size_t>(d0)];
    if (d0 == d0n) return false;  // an uncovered involution can never be tiled once

    for (std::int32_t c = 1; c < n; ++c) {
      if (++nodes > max_nodes) {
        budget_hit = true;
        return false;
      }
      if (covered[static_cast<std::size_t>(c)]) continue;
      std::int32_t cn = neg[static_cast<std::size_t>(c)];
      std::int32_t e1 = sub(c, d0);  // c - delta
      if (covered[static_cast<std::size_t>(e1)]) continue;
      std::int32_t e2 = neg[static_cast<std::size_t>(e1)];
      if (c >= e2) continue;  // {0,d,c} and {0,d,d-c} are the same block class
      std::int32_t six[6] = {d0, d0n, c, cn, e1, e2};
      bool distinct = true;
      for (int i = 0; i < 6 && distinct; ++i) {
        for (int j = i + 1; j < 6; ++j) {
          if (six[i] == six[j]) {
            distinct = false;
            break;
          }
        }
      }
      if (!distinct) continue;

      for (auto key : six) covered[static_cast<std::size_t>(key)] = 1;
      remaining -= 6;
      chosen.emplace_back(d0, c);
      if (solve(idx + 1)) return true;
      chosen.pop_back();
      remaining += 6;
      for (auto key : six) covered[static_cast<std::size_t>(key)] = 0;
      if (budget_hit) return false;
    }
    return false;
  }
};

}  // namespace

DfSolve solve_relative_df(const AbelianGroup& g, const PartialSpread& spread,
                          std::uint64_t max_nodes) {
  if (g.order() > kSolverGroupLimit) {
    throw Error("solver supports groups of order <= " + std::to_string(kSolverGroupLimit));
  }
  DfSolve result;
  std::vector<char> holes = hole_mask(g, spread);
  std::int64_t uncovered = g.order() - hole_count(holes);
  if (uncovered % 6 != 0) {
    result.status = SearchStatus::kAbsent;
    return result;
  }

  DfSolver solver(g, max_nodes);
  solver.covered = holes;
  solver.remaining = uncovered;
  bool found = solver.solve(0);
  result.nodes = solver.nodes;
  if (found) {
    DifferenceFamily df;
    df.group = g;
    df.spread = spread;
    for (auto [d0, c] : solver.chosen) {
      df.base_blocks.push_back(Triple::of(g, g.zero(), g.unpack(d0), g.unpack(c)));
    }
    df = canonicalized(std::move(df));
    auto check = verify_relative_df(df);
    if (!check.delta_ok) throw VerifyError("solver produced an invalid family: " + check.summary());
    result.status = SearchStatus::kFound;
    result.df = std::move(df);
  } else if (solver.budget_hit) {
    result.status = SearchStatus::kBudgetExceeded;
  } else {
    result.status = SearchStatus::kAbsent;
  }
  return result;
}

// ---------------------------------------------------------------------------
// Raw pipeline shared by the catalogue constructors. Intermediate stages are
// tracked as (group, hole set, blocks); the hole set is the union of the
// relative subgroups, which stay well defined even when the members overlap
// mid-construction. finalize() decomposes the holes back into the canonical
// prime-order spread and runs the full verifier.
// ---------------------------------------------------------------------------

namespace {

struct RawDf {
  AbelianGroup group;
  std::vector<char> holes;
  std::vector<Triple> blocks;
};

RawDf raw_from_df(const DifferenceFamily& df) {
  return RawDf{df.group, hole_mask(df.group, df.spread), df.base_blocks};
}

void check_delta_raw(const RawDf& raw, const std::string& what) {
  std::vector<std::int32_t> count(static_cast<std::size_t>(raw.group.order()), 0);
  for (const auto& t : raw.blocks) {
    for (const auto& d : delta(raw.group, t)) ++count[static_cast<std::size_t>(raw.group.pack(d))];
  }
  for (std::int64_t key = 0; key < raw.group.order(); ++key) {
    auto k = static_cast<std::size_t>(key);
    std::int32_t expected = raw.holes[k] ? 0 : 1;
    if (count[k] != expected) {
      throw VerifyError(what + ": difference " + raw.group.format_element(raw.group.unpack(key)) +
                        " covered " + std::to_string(count[k]) + " times, expected " +
                        std::to_string(expected));
    }
  }
}

DifferenceFamily finalize_raw(const RawDf& raw, const std::string& what) {
  check_delta_raw(raw, what);
  std::string err;
  auto spread = prime_spread_from_holes(raw.group, raw.holes, &err);
  if (!spread) throw VerifyError(what + ": " + err);
  DifferenceFamily df{raw.group, std::move(*spread), raw.blocks};
  df = canonicalized(std::move(df));
  auto check = verify_relative_df(df);
  if (!check.pass) throw VerifyError(what + ": " + check.summary());
  return df;
}

/// Infers the hole set from the block deltas; any multiplicity above one is
/// a transcription error and aborts.
DifferenceFamily df_from_blocks(const AbelianGroup& g, std::vector<Triple> blocks,
                                const std::string& what) {
  std::vector<std::int32_t> count(static_cast<std::size_t>(g.order()), 0);
  for (const auto& t : blocks) {
    for (const auto& d : delta(g, t)) ++count[static_cast<std::size_t>(g.pack(d))];
  }
  std::vector<char> holes(static_cast<std::size_t>(g.order()), 0);
  for (std::int64_t key = 0; key < g.order(); ++key) {
    auto k = static_cast<std::size_t>(key);
    if (count[k] == 0) {
      holes[k] = 1;
    } else if (count[k] != 1) {
      throw VerifyError(what + ": difference " + g.format_element(g.unpack(key)) + " appears " +
                        std::to_string(count[k]) + " times");
    }
  }
  return finalize_raw(RawDf{g, std::move(holes), std::move(blocks)}, what);
}

RawDf expand_raw(const RawDf& in, const DifferenceMatrix& m) {
  std::vector<std::int64_t> factors = in.group.factors();
  factors.insert(factors.end(), m.group.factors().begin(), m.group.factors().end());
  AbelianGroup g(std::move(factors));
  std::int64_t nk = m.group.order();

  RawDf out;
  out.group = g;
  out.holes.assign(static_cast<std::size_t>(g.order()), 0);
  for (std::int64_t h = 0; h < in.group.order(); ++h) {
    if (!in.holes[static_cast<std::size_t>(h)]) continue;
    for (std::int64_t k = 0; k < nk; ++k) {
      out.holes[static_cast<std::size_t>(h * nk + k)] = 1;  // packed keys concatenate
    }
  }
  auto cat = [&](const GroupElement& a, const GroupElement& b) {
    GroupElement e;
    e.coords = a.coords;
    e.coords.insert(e.coords.end(), b.coords.begin(), b.coords.end());
    return e;
  };
  out.blocks.reserve(in.blocks.size() * static_cast<std::size_t>(nk));
  for (const auto& t : in.blocks) {
    for (std::int64_t j = 0; j < nk; ++j) {
      auto col = static_cast<std::size_t>(j);
      out.blocks.push_back(Triple::of(g, cat(t.points[0], m.rows[0][col]),
                                      cat(t.points[1], m.rows[1][col]),
                                      cat(t.points[2], m.rows[2][col])));
    }
  }
  return out;
}

/// Injective homomorphism of a small group onto a subgroup of `target`,
/// given by one generator image per source factor.
struct Embedding {
  AbelianGroup source;
  AbelianGroup target;
  std::vector<GroupElement> images;

  GroupElement apply(const GroupElement& e) const {
    GroupElement out = target.zero();
    for (std::size_t i = 0; i < images.size(); ++i) {
      out = target.add(out, target.mul(e.coords[i], images[i]));
    }
    return out;
  }
};

Embedding make_embedding(AbelianGroup source, const AbelianGroup& target,
                         std::vector<GroupElement> images) {
  if (images.size() != source.rank()) throw Error("embedding needs one image per source factor");
  for (std::size_t i = 0; i < images.size(); ++i) {
    target.require_element(images[i]);
    if (target.element_order(images[i]) != source.factors()[i]) {
      throw Error("embedding image " + std::to_string(i) + " has wrong order");
    }
  }
  Embedding emb{std::move(source), target, std::move(images)};
  std::vector<std::int64_t> seen;
  for (const auto& e : emb.source.elements()) seen.push_back(target.pack(emb.apply(e)));
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw Error("embedding is not injective");
  }
  return emb;
}

/// Replaces the hole subgroup emb(source) by a difference family living on
/// it: the image is removed from the holes, the patch's own holes and blocks
/// are embedded in its place.
void patch_raw(RawDf& raw, const Embedding& emb, const DifferenceFamily& patch,
               const std::string& what) {
  if (!(patch.group == emb.source)) throw Error(what + ": patch group mismatch");
  if (!(raw.group == emb.target)) throw Error(what + ": embedding target mismatch");
  for (const auto& e : emb.source.elements()) {
    auto key = static_cast<std::size_t>(raw.group.pack(emb.apply(e)));
    if (!raw.holes[key]) {
      throw VerifyError(what + ": patch target is not contained in the current holes");
    }
    raw.holes[key] = 0;
  }
  std::vector<char> ph = hole_mask(patch.group, patch.spread);
  for (std::int64_t key = 0; key < patch.group.order(); ++key) {
    if (!ph[static_cast<std::size_t>(key)]) continue;
    GroupElement img = emb.apply(patch.group.unpack(key));
    raw.holes[static_cast<std::size_t>(raw.group.pack(img))] = 1;
  }
  for (const auto& t : patch.base_blocks) {
    raw.blocks.push_back(Triple::of(raw.group, emb.apply(t.points[0]), emb.apply(t.points[1]),
                                    emb.apply(t.points[2])));
  }
}

RawDf transport_raw(const RawDf& in, const AbelianGroup& target, const std::string& what) {
  auto iso = isomorphism_to(in.group, target);
  if (!iso) throw Error(what + ": groups " + in.group.descriptor() + " and " +
                        target.descriptor() + " are not isomorphic");
  RawDf out;
  out.group = target;
  out.holes.assign(static_cast<std::size_t>(target.order()), 0);
  for (std::int64_t key = 0; key < in.group.order(); ++key) {
    if (!in.holes[static_cast<std::size_t>(key)]) continue;
    out.holes[static_cast<std::size_t>(target.pack(iso->apply(in.group.unpack(key))))] = 1;
  }
  out.blocks.reserve(in.blocks.size());
  for (const auto& t : in.blocks) {
    out.blocks.push_back(Triple::of(target, iso->apply(t.points[0]), iso->apply(t.points[1]),
                                    iso->apply(t.points[2])));
  }
  return out;
}

std::vector<std::int64_t> repeat_factor(std::int64_t value, std::int64_t times) {
  return std::vector<std::int64_t>(static_cast<std::size_t>(times), value);
}

AbelianGroup group_of(std::vector<std::int64_t> factors) {
  std::erase(factors, 1);
  return AbelianGroup(std::move(factors));
}

std::vector<Subgroup> forced_involution_members(const AbelianGroup& g) {
  std::vector<Subgroup> out;
  for (const auto& s : involutions(g)) out.push_back(cyclic_subgroup(g, s));
  return out;
}

const Subgroup& single_order3_member(const DifferenceFamily& df, const std::string& what) {
  const Subgroup* found = nullptr;
  for (const auto& m : df.spread.members) {
    if (m.order() == 3) {
      if (found) throw Error(what + ": expected exactly one order-3 member");
      found = &m;
    }
  }
  if (!found) throw Error(what + ": no order-3 spread member");
  return *found;
}

std::vector<const Subgroup*> order3_members(const DifferenceFamily& df) {
  std::vector<const Subgroup*> out;
  for (const auto& m : df.spread.members) {
    if (m.order() == 3) out.push_back(&m);
  }
  return out;
}

GroupElement generator_of(const Subgroup& s) {
  // elements are sorted with zero first
  return s.elements().at(1);
}

GroupElement widen_left(const AbelianGroup& target, const GroupElement& e, std::size_t pad_left) {
  GroupElement out = target.zero();
  for (std::size_t i = 0; i < e.coords.size(); ++i) out.coords[pad_left + i] = e.coords[i];
  return out;
}

GroupElement unit_of(const AbelianGroup& g, std::size_t index) {
  GroupElement e = g.zero();
  e.coords[index] = 1;
  return e;
}

void expect_type(const DifferenceFamily& df, std::int64_t f, std::int64_t e,
                 const std::string& what) {
  SpreadType t = spread_type(df.spread);
  if (!t.clean() || t.order2 != f || t.order3 != e) {
    throw VerifyError(what + ": spread type " + t.to_string() + " but expected 2^" +
                      std::to_string(f) + ",3^" + std::to_string(e));
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Workspace
// ---------------------------------------------------------------------------

Workspace::Workspace() = default;

Workspace::Workspace(BuildOptions options, DiskCache disk)
    : options_(options), disk_(std::move(disk)) {}

LangfordSequence Workspace::langford(std::int64_t k, std::int64_t a, std::int64_t b) {
  std::scoped_lock lock(mutex_);
  auto key = std::tuple(k, a, b);
  langford_log_.push_back(key);
  if (auto it = langford_memo_.find(key); it != langford_memo_.end()) return it->second;

  std::string cache_key = "langford-" + std::to_string(k) + "-" + std::to_string(a) + "-" +
                          std::to_string(b);
  if (auto payload = disk_.load(cache_key)) {
    auto j = ordered_json::parse(*payload, nullptr, false);
    if (!j.is_discarded() && j.is_array()) {
      LangfordSequence seq{k, a, b, j.get<std::vector<std::int64_t>>()};
      if (langford_valid(seq)) {
        langford_memo_[key] = seq;
        return seq;
      }
    }
  }
  if (!is_langford_admissible(k, a, b)) {
    throw Error("(" + std::to_string(k) + "," + std::to_string(a) + "," + std::to_string(b) +
                ") is not Langford admissible");
  }
  auto search = find_extended_langford(k, a, b, options_.langford_budget);
  if (search.status == SearchStatus::kBudgetExceeded) {
    throw BudgetError("Langford search budget exhausted");
  }
  if (search.status == SearchStatus::kAbsent) {
    throw VerifyError("admissible Langford parameters with no sequence; this cannot happen");
  }
  disk_.store(cache_key, dump_json(ordered_json(search.seq.s)));
  langford_memo_[key] = search.seq;
  return search.seq;
}

std::vector<std::tuple<std::int64_t, std::int64_t, std::int64_t>> Workspace::langford_requests()
    const {
  std::scoped_lock lock(mutex_);
  return langford_log_;
}

DifferenceMatrix Workspace::dm(const AbelianGroup& k) {
  std::scoped_lock lock(mutex_);
  std::string key = k.descriptor();
  if (auto it = dm_memo_.find(key); it != dm_memo_.end()) return it->second;

  std::string cache_key = "dm-" + key;
  if (auto payload = disk_.load(cache_key)) {
    auto j = ordered_json::parse(*payload, nullptr, false);
    if (!j.is_discarded()) {
      try {
        DifferenceMatrix m = dm_from_json(j);
        if (m.group == k && verify_dm(m).pass) {
          dm_memo_[key] = m;
          return m;
        }
      } catch (const Error&) {
      }
    }
  }
  DifferenceMatrix m = dm_build(k, options_.dm_budget);
  auto check = verify_dm(m);
  if (!check.pass) throw VerifyError("dm_build produced an invalid matrix: " + check.summary());
  disk_.store(cache_key, dump_json(dm_to_json(m)));
  dm_memo_[key] = m;
  return m;
}

namespace {

struct IngredientTarget {
  AbelianGroup group;
  std::int64_t f = 0;
  std::int64_t e = 0;
};

IngredientTarget ingredient_target(IngredientKind kind, std::int64_t param) {
  switch (kind) {
    case IngredientKind::kCyclic1Mod6:
      if (param < 1 || param % 6 != 1) throw Error("cyclic-1mod6 needs v = 1 (mod 6)");
      return {AbelianGroup::cyclic(param), 0, 0};
    case IngredientKind::kCyclic3Mod6:
      if (param < 3 || param % 6 != 3) throw Error("cyclic-3mod6 needs v = 3 (mod 6)");
      if (param == 9) return {AbelianGroup({3, 3}), 0, 1};
      return {AbelianGroup::cyclic(param), 0, 1};
    case IngredientKind::kCyclicRel2:
      if (param < 2 || (param % 24 != 2 && param % 24 != 8)) {
        throw Error("cyclic-rel2 needs v = 2,8 (mod 24)");
      }
      return {AbelianGroup::cyclic(param), 1, 0};
    case IngredientKind::kZ3xZ6n:
      if (param < 1 || (param % 4 != 0 && param % 4 != 1)) {
        throw Error("z3xz6n needs n = 0,1 (mod 4), n >= 1");
      }
      return {AbelianGroup({3, 6 * param}), 1, 2};
    case IngredientKind::kZ4xZ12n:
      if (param < 1) throw Error("z4xz12n needs n >= 1");
      return {AbelianGroup({4, 12 * param}), 3, 1};
    case IngredientKind::kZ2x2xOdd:
      if (param < 0) throw Error("z2x2xodd needs n >= 0");
      return {AbelianGroup({2, 2, 6 * param + 3}), 3, 1};
  }
  throw Error("unknown ingredient kind");
}

std::vector<PartialSpread> ingredient_spread_candidates(const IngredientTarget& target) {
  const AbelianGroup& g = target.group;
  std::vector<Subgroup> base = forced_involution_members(g);
  if (static_cast<std::int64_t>(base.size()) != target.f) {
    throw Error("group " + g.descriptor() + " has " + std::to_string(base.size()) +
                " involutions, expected " + std::to_string(target.f));
  }
  std::vector<PartialSpread> out;
  if (target.e == 0) {
    out.push_back(PartialSpread{base});
    return out;
  }
  std::vector<Subgroup> thirds = order_p_subgroups(g, 3);
  if (target.e == 1) {
    for (const auto& s : thirds) {
      PartialSpread sp{base};
      sp.members.push_back(s);
      out.push_back(std::move(sp));
    }
  } else if (target.e == 2) {
    for (std::size_t i = 0; i < thirds.size(); ++i) {
      for (std::size_t j = i + 1; j < thirds.size(); ++j) {
        PartialSpread sp{base};
        sp.members.push_back(thirds[i]);
        sp.members.push_back(thirds[j]);
        out.push_back(std::move(sp));
      }
    }
  } else {
    throw Error("unsupported ingredient spread multiplicity");
  }
  if (out.empty()) throw Error("no candidate spread for " + g.descriptor());
  return out;
}

}  // namespace

DifferenceFamily Workspace::ingredient(IngredientKind kind, std::int64_t param) {
  IngredientTarget target = ingredient_target(kind, param);
  std::scoped_lock lock(mutex_);
  std::string key = "df-" + to_string(kind) + "-" + std::to_string(param);
  if (auto it = df_memo_.find(key); it != df_memo_.end()) return it->second;

  if (auto payload = disk_.load(key)) {
    auto j = ordered_json::parse(*payload, nullptr, false);
    if (!j.is_discarded()) {
      try {
        DifferenceFamily df = df_from_json(j);
        SpreadType t = spread_type(df.spread);
        if (df.group == target.group && t.clean() && t.order2 == target.f &&
            t.order3 == target.e && verify_relative_df(df).pass) {
          df_memo_[key] = df;
          return df;
        }
      } catch (const Error&) {
      }
    }
  }

  bool budget_hit = false;
  for (const auto& spread : ingredient_spread_candidates(target)) {
    auto solved = solve_relative_df(target.group, spread, options_.solver_budget);
    if (solved.status == SearchStatus::kFound) {
      disk_.store(key, dump_json(df_to_json(*solved.df)));
      df_memo_[key] = *solved.df;
      return *solved.df;
    }
    if (solved.status == SearchStatus::kBudgetExceeded) budget_hit = true;
  }
  if (budget_hit) throw BudgetError("ingredient search budget exhausted for " + key);
  throw VerifyError("no difference family found for guaranteed ingredient " + key);
}

DifferenceFamily ingredient_df(Workspace& ws, IngredientKind kind, std::int64_t param) {
  return ws.ingredient(kind, param);
}

// ---------------------------------------------------------------------------
// Composition
// ---------------------------------------------------------------------------

DifferenceFamily expand_by_dm(const DifferenceFamily& df, const DifferenceMatrix& m) {
  auto dfc = verify_relative_df(df);
  if (!dfc.delta_ok) throw Error("expand_by_dm: input family invalid: " + dfc.summary());
  auto dmc = verify_dm(m);
  if (!dmc.pass) throw Error("expand_by_dm: input matrix invalid: " + dmc.summary());

  RawDf out = expand_raw(raw_from_df(df), m);
  DifferenceFamily result;
  result.group = out.group;
  result.base_blocks = std::move(out.blocks);
  // Spread members become S x K.
  for (const auto& s : df.spread.members) {
    std::vector<GroupElement> elems;
    elems.reserve(static_cast<std::size_t>(s.order() * m.group.order()));
    for (const auto& a : s.elements()) {
      for (const auto& b : m.group.elements()) {
        GroupElement e;
        e.coords = a.coords;
        e.coords.insert(e.coords.end(), b.coords.begin(), b.coords.end());
        elems.push_back(std::move(e));
      }
    }
    result.spread.members.emplace_back(result.group, std::move(elems));
  }
  result = canonicalized(std::move(result));
  check_delta_raw(raw_from_df(result), "expand_by_dm");
  return result;
}

// ---------------------------------------------------------------------------
// Explicit-table families
// ---------------------------------------------------------------------------

DifferenceFamily df_over_z2x2_z4d(Workspace& ws, std::int64_t d) {
  if (d < 5 || d % 6 != 5) throw Error("df_over_z2x2_z4d needs d = 5 (mod 6)");
  AbelianGroup g({2, 2, 4 * d});
  auto E = [&](std::int64_t x1, std::int64_t x2, std::int64_t z) { return g.make({x1, x2, z}); };
  std::vector<Triple> blocks;

  // alpha = (1,0), beta = (0,1), gamma = (1,1)
  for (std::int64_t i = 1; i <= d - 1; ++i) {
    blocks.push_back(Triple::of(g, E(0, 0, 0), E(1, 0, i), E(1, 1, 2 * i)));
  }
  for (std::int64_t i = d; i <= 2 * d - 3; ++i) {
    blocks.push_back(Triple::of(g, E(0, 0, 0), E(1, 0, i + 1), E(1, 1, 2 * i + 1)));
  }
  blocks.push_back(Triple::of(g, E(0, 0, 0), E(0, 0, d + 1), E(1, 0, 2 * d + 1)));
  blocks.push_back(Triple::of(g, E(0, 0, 0), E(0, 0, 1), E(0, 1, 2 * d + 2)));
  blocks.push_back(Triple::of(g, E(0, 0, 0), E(0, 0, 2), E(1, 1, 3)));

  if (d == 5) {
    blocks.push_back(Triple::of(g, E(0, 0, 0), E(0, 0, 3), E(0, 0, 8)));
    blocks.push_back(Triple::of(g, E(0, 0, 0), E(0, 0, 4), E(0, 0, 11)));
  } else {
    auto seq = ws.langford((d + 1) / 3, (2 * d - 4) / 3, 3);
    for (const auto& t : langford_triples(seq)) {
      blocks.push_back(Triple::of(g, E(0, 0, t[0]), E(0, 0, t[1]), E(0, 0, t[2])));
    }
  }
  auto df = df_from_blocks(g, std::move(blocks), "df_over_z2x2_z4d(" + std::to_string(d) + ")");
  expect_type(df, 7, 0, "df_over_z2x2_z4d");
  return df;
}

DifferenceFamily df_over_z2x3_z4d(Workspace& ws, std::int64_t d) {
  if (d < 5 || d % 6 != 5) throw Error("df_over_z2x3_z4d needs d = 5 (mod 6)");
  AbelianGroup g({2, 2, 2, 4 * d});
  auto E = [&](std::int64_t x1, std::int64_t x2, std::int64_t t, std::int64_t z) {
    return g.make({x1, x2, t, z});
  };
  std::vector<Triple> blocks;

  for (std::int64_t j = 1; j <= d - 1; ++j) {
    blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(1, 0, 0, j), E(1, 1, 0, 2 * j + 1)));
    blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(1, 0, 0, j + d), E(1, 1, 1, 2 * (j + d))));
    blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(1, 0, 1, j), E(1, 1, 0, 2 * j)));
    blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(1, 0, 1, j + d - 1), E(1, 1, 1, 2 * (j + d) - 1)));
  }
  blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 1, d + 1), E(1, 0, 1, 2 * d + 1)));
  blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 1, d - 1), E(0, 1, 1, d)));
  blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 1, 2), E(1, 1, 1, 1)));

  if (d == 11) {
    blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 0, 1), E(0, 0, 0, 21)));
    blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 0, 3), E(0, 0, 0, 19)));
    blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 0, 2), E(0, 0, 0, 8)));
    blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 0, 4), E(0, 0, 0, 18)));
    blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 1, 1), E(0, 0, 0, 12)));
    blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 1, 23), E(0, 0, 0, 10)));
    for (std::int64_t i = 7; i <= 13; ++i) {
      blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 1, i - 4), E(0, 0, 1, 27 - i)));
    }
  } else {
    bool mod5 = d % 12 == 5;
    if (mod5) {
      blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 1, d + 3), E(0, 0, 0, -1)));
      blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 1, 1), E(0, 0, 0, -2)));
      blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 1, d), E(0, 0, 0, 2 * d + 2)));
    } else {
      blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 1, d + 2), E(0, 0, 0, -2)));
      blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 1, 1), E(0, 0, 0, 4)));
      blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 1, d), E(0, 0, 0, -3)));
    }
    for (std::int64_t i = 4; i <= d - 2; ++i) {
      blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 1, i), E(0, 0, 1, 2 * d + 3 - i)));
    }
    if (mod5) {
      blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 0, 3), E(0, 0, 0, 2 * d - 3)));
      blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 0, 5), E(0, 0, 0, 2 * d + 1)));
    } else {
      blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 0, 2 * d - 6), E(0, 0, 0, 2 * d - 1)));
      blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 0, 2 * d - 3), E(0, 0, 0, 2 * d - 2)));
    }
    // remaining even differences are supplied by a doubled Langford family
    auto seq = mod5 ? ws.langford(2 * (d - 5) / 3 + 1, (d - 5) / 3, 2)
                    : ws.langford(2 * (d - 5) / 3, (d - 5) / 3, 3);
    for (const auto& t : langford_triples(seq)) {
      blocks.push_back(Triple::of(g, E(0, 0, 0, 2 * t[0]), E(0, 0, 0, 2 * t[1]), E(0, 0, 0, 2 * t[2])));
    }
  }
  auto df = df_from_blocks(g, std::move(blocks), "df_over_z2x3_z4d(" + std::to_string(d) + ")");
  expect_type(df, 15, 0, "df_over_z2x3_z4d");
  return df;
}

DifferenceFamily df_over_z2x3_z12() {
  AbelianGroup g({2, 2, 2, 12});
  auto E = [&](std::int64_t x1, std::int64_t x2, std::int64_t t, std::int64_t z) {
    return g.make({x1, x2, t, z});
  };
  // alpha_1 = (1,0), alpha_2 = (0,1), alpha_3 = (1,1), alpha_4 = alpha_1
  const std::array<std::array<std::int64_t, 2>, 4> alpha = {{{1, 0}, {0, 1}, {1, 1}, {1, 0}}};
  std::vector<Triple> blocks;
  for (int i = 0; i < 3; ++i) {
    blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(alpha[i][0], alpha[i][1], 1, 4),
                                E(alpha[i + 1][0], alpha[i + 1][1], 1, 9)));
  }
  for (int i = 0; i < 3; ++i) {
    blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(alpha[i][0], alpha[i][1], 1, 2),
                                E(alpha[i + 1][0], alpha[i + 1][1], 1, 5)));
  }
  blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(1, 0, 0, 4), E(1, 1, 0, 8)));
  blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(1, 0, 0, 1), E(1, 1, 0, 2)));
  blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 1, 1), E(1, 0, 1, 11)));
  blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 1, 3), E(0, 1, 1, 1)));
  blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 1, 2), E(1, 1, 1, 1)));
  blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 1, 4), E(0, 0, 0, 11)));
  blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 0, 3), E(0, 0, 0, 10)));

  auto df = df_from_blocks(g, std::move(blocks), "df_over_z2x3_z12");
  expect_type(df, 15, 1, "df_over_z2x3_z12");
  return df;
}

DifferenceFamily df_over_z2x3_z3x2() {
  AbelianGroup g({2, 2, 2, 3, 3});
  auto T = [&](std::initializer_list<std::int64_t> a, std::initializer_list<std::int64_t> b,
               std::initializer_list<std::int64_t> c) {
    return Triple::of(g, g.make(a), g.make(b), g.make(c));
  };
  std::vector<Triple> blocks = {
      T({0, 0, 0, 0, 0}, {0, 0, 1, 1, 0}, {0, 0, 0, 2, 2}),
      T({0, 0, 0, 0, 0}, {0, 0, 1, 1, 1}, {0, 0, 0, 1, 2}),
      T({0, 0, 0, 0, 0}, {0, 1, 1, 2, 1}, {1, 0, 0, 0, 2}),
      T({0, 0, 0, 0, 0}, {0, 1, 1, 0, 1}, {1, 0, 0, 2, 1}),
      T({0, 0, 0, 0, 0}, {1, 1, 1, 2, 1}, {0, 1, 0, 0, 2}),
      T({0, 0, 0, 0, 0}, {1, 1, 1, 0, 1}, {0, 1, 0, 2, 1}),
      T({0, 0, 0, 0, 0}, {1, 0, 1, 2, 1}, {1, 1, 0, 0, 2}),
      T({0, 0, 0, 0, 0}, {1, 0, 1, 0, 1}, {1, 1, 0, 2, 1}),
      T({0, 0, 0, 0, 0}, {0, 1, 0, 1, 0}, {1, 0, 0, 2, 0}),
      T({0, 0, 0, 0, 0}, {0, 1, 0, 1, 1}, {1, 0, 0, 2, 2}),
  };
  auto df = df_from_blocks(g, std::move(blocks), "df_over_z2x3_z3x2");
  expect_type(df, 7, 2, "df_over_z2x3_z3x2");
  return df;
}

DifferenceFamily df_over_z2x2_z3_z12() {
  AbelianGroup g({2, 2, 3, 12});
  auto E = [&](std::int64_t x1, std::int64_t x2, std::int64_t h1, std::int64_t h2) {
    return g.make({x1, x2, h1, h2});
  };
  // a_i = 6 - i; a'_i = 5 + i for i <= 3, else 6 + i
  std::array<std::int64_t, 5> a{}, ap{};
  for (std::int64_t i = 1; i <= 5; ++i) {
    a[static_cast<std::size_t>(i - 1)] = 6 - i;
    ap[static_cast<std::size_t>(i - 1)] = i <= 3 ? 5 + i : 6 + i;
  }
  std::vector<Triple> blocks;
  for (std::size_t i = 0; i < 5; ++i) {
    blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(1, 0, 1, a[i]), E(1, 1, 2, a[i] - ap[i])));
  }
  for (std::size_t i = 0; i < 5; ++i) {
    blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(1, 0, 1, ap[i]), E(1, 1, 2, ap[i] - a[i])));
  }
  blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(1, 0, 1, 0), E(1, 1, 2, 0)));
  blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(1, 0, 0, 4), E(1, 1, 0, 8)));
  blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(1, 0, 0, 1), E(1, 1, 0, 3)));
  blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(1, 0, 0, 2), E(1, 1, 0, 11)));
  blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(1, 0, 0, 9), E(1, 1, 0, 10)));
  blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 1, 4), E(1, 0, 1, 9)));
  blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 1, 8), E(0, 1, 1, 3)));
  blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 1, 1), E(1, 1, 1, 6)));
  blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 0, 1), E(0, 0, 1, 11)));
  blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 0, 2), E(0, 0, 1, 5)));
  blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 0, 3), E(0, 0, 1, 9)));
  blocks.push_back(Triple::of(g, E(0, 0, 0, 0), E(0, 0, 0, 5), E(0, 0, 1, 7)));

  auto df = df_from_blocks(g, std::move(blocks), "df_over_z2x2_z3_z12");
  expect_type(df, 7, 2, "df_over_z2x2_z3_z12");
  return df;
}

// ---------------------------------------------------------------------------
// Inductive chains
// ---------------------------------------------------------------------------

namespace {

/// One induction step shared by both chains: inflate by a DM over Z_2^2 and
/// patch every inflated order-3 member with the one-block family over
/// Z_2^2 x Z_3 relative to {Z_2^2, Z_3}.
DifferenceFamily chain_step(Workspace& ws, const DifferenceFamily& prev,
                            const AbelianGroup& target, const std::string& what) {
  RawDf raw = expand_raw(raw_from_df(prev), ws.dm(AbelianGroup({2, 2})));
  DifferenceFamily patch = ws.ingredient(IngredientKind::kZ2x2xOdd, 0);
  std::size_t prev_rank = prev.group.rank();
  for (const Subgroup* k3 : order3_members(prev)) {
    GroupElement gen = widen_left(raw.group, generator_of(*k3), 0);
    std::vector<GroupElement> images = {unit_of(raw.group, prev_rank),
                                        unit_of(raw.group, prev_rank + 1), gen};
    patch_raw(raw, make_embedding(patch.group, raw.group, std::move(images)), patch, what);
  }
  return finalize_raw(transport_raw(raw, target, what), what);
}

AbelianGroup chain_e1_group(std::int64_t x, std::int64_t y) {
  std::vector<std::int64_t> factors = repeat_factor(2, x - 1);
  factors.push_back(std::int64_t(1) << y);
  factors.push_back(3);
  return group_of(std::move(factors));
}

AbelianGroup chain_e2_group(std::int64_t x, std::int64_t y) {
  std::vector<std::int64_t> factors = repeat_factor(2, x - 1);
  factors.push_back(std::int64_t(1) << y);
  factors.push_back(3);
  factors.push_back(3);
  return group_of(std::move(factors));
}

}  // namespace

DifferenceFamily df_chain_e1(Workspace& ws, std::int64_t x, std::int64_t y) {
  if (y != 1 && y != 2) throw Error("df_chain_e1 needs y in {1,2}");
  if (x % 2 != 0 || x < 2 * y) throw Error("df_chain_e1 needs even x >= 2y");
  std::string what = "df_chain_e1(" + std::to_string(x) + "," + std::to_string(y) + ")";
  AbelianGroup target = chain_e1_group(x, y);
  DifferenceFamily df;
  if (x == 2 * y) {
    df = y == 1 ? ws.ingredient(IngredientKind::kZ2x2xOdd, 0)
                : finalize_raw(transport_raw(raw_from_df(df_over_z2x3_z12()), target, what), what);
  } else {
    df = chain_step(ws, df_chain_e1(ws, x - 2, y), target, what);
  }
  expect_type(df, (std::int64_t(1) << x) - 1, 1, what);
  return df;
}

DifferenceFamily df_chain_e2(Workspace& ws, std::int64_t x, std::int64_t y) {
  if (y != 1 && y != 2) throw Error("df_chain_e2 needs y in {1,2}");
  if (x % 2 != 1 || x < 3) throw Error("df_chain_e2 needs odd x >= 3");
  std::string what = "df_chain_e2(" + std::to_string(x) + "," + std::to_string(y) + ")";
  AbelianGroup target = chain_e2_group(x, y);
  DifferenceFamily df;
  if (x == 3) {
    df = y == 1 ? df_over_z2x3_z3x2()
                : finalize_raw(transport_raw(raw_from_df(df_over_z2x2_z3_z12()), target, what), what);
  } else {
    df = chain_step(ws, df_chain_e2(ws, x - 2, y), target, what);
  }
  expect_type(df, (std::int64_t(1) << x) - 1, 2, what);
  return df;
}

// ---------------------------------------------------------------------------
// Case builders
// ---------------------------------------------------------------------------

namespace {

std::int64_t pow2(std::int64_t e) { return std::int64_t(1) << e; }

void require_case(bool ok, const std::string& what) {
  if (!ok) throw Error(what);
}

}  // namespace

DifferenceFamily build_case_a(Workspace& ws, std::int64_t m, std::int64_t ell, std::int64_t d) {
  std::string what = "build_case_a(" + std::to_string(m) + "," + std::to_string(ell) + "," +
                     std::to_string(d) + ")";
  require_case(m >= 3 && ell >= 0 && d >= 1 && d % 2 == 1, what + ": bad parameters");
  require_case(d % 6 == (ell % 2 == 0 ? 1 : 5), what + ": d != (-1)^ell (mod 6)");

  DifferenceFamily result;
  if (ell == 0) {
    DifferenceFamily base = ws.ingredient(IngredientKind::kCyclic1Mod6, d);
    RawDf raw = expand_raw(raw_from_df(base), ws.dm(AbelianGroup(repeat_factor(2, m))));
    std::vector<std::int64_t> factors = repeat_factor(2, m);
    if (d > 1) factors.push_back(d);
    result = finalize_raw(transport_raw(raw, group_of(std::move(factors)), what), what);
  } else if (ell == 1) {
    if (m == 4) {
      result = df_over_z2x3_z4d(ws, d);
    } else {
      RawDf raw = expand_raw(raw_from_df(df_over_z2x2_z4d(ws, d)),
                             ws.dm(AbelianGroup(repeat_factor(2, m - 3))));
      std::vector<std::int64_t> factors = repeat_factor(2, m - 1);
      factors.push_back(4 * d);
      result = finalize_raw(transport_raw(raw, group_of(std::move(factors)), what), what);
    }
  } else {
    std::int64_t w = pow2(ell + 1) * d;
    require_case(w % 24 == 8, what + ": 2^(ell+1)d != 8 (mod 24)");
    DifferenceFamily base = ws.ingredient(IngredientKind::kCyclicRel2, w);
    RawDf raw = expand_raw(raw_from_df(base), ws.dm(AbelianGroup(repeat_factor(2, m - 1))));
    std::vector<std::int64_t> factors = repeat_factor(2, m - 1);
    factors.push_back(w);
    result = finalize_raw(transport_raw(raw, group_of(std::move(factors)), what), what);
  }
  expect_type(result, pow2(m) - 1, 0, what);
  return result;
}

DifferenceFamily build_case_b_even(Workspace& ws, std::int64_t m, std::int64_t ell,
                                   std::int64_t d) {
  std::string what = "build_case_b_even(" + std::to_string(m) + "," + std::to_string(ell) + "," +
                     std::to_string(d) + ")";
  require_case(m >= 4 && m % 2 == 0 && ell >= 0 && d >= 3 && d % 6 == 3, what + ": bad parameters");

  RawDf raw;
  AbelianGroup target;
  if (ell == 0) {
    DifferenceFamily base = ws.ingredient(IngredientKind::kZ2x2xOdd, (d - 3) / 6);
    raw = expand_raw(raw_from_df(base), ws.dm(AbelianGroup(repeat_factor(2, m - 2))));
    const Subgroup& k3 = single_order3_member(base, what);
    std::size_t base_rank = base.group.rank();
    DifferenceFamily patch = df_chain_e1(ws, m - 2, 1);
    std::vector<GroupElement> images;
    for (std::int64_t i = 0; i < m - 2; ++i) {
      images.push_back(unit_of(raw.group, base_rank + static_cast<std::size_t>(i)));
    }
    images.push_back(widen_left(raw.group, generator_of(k3), 0));
    patch_raw(raw, make_embedding(patch.group, raw.group, std::move(images)), patch, what);
    std::vector<std::int64_t> factors = repeat_factor(2, m);
    factors.push_back(d);
    target = group_of(std::move(factors));
  } else if (ell == 1) {
    DifferenceFamily base = ws.ingredient(IngredientKind::kCyclic3Mod6, d);
    std::vector<std::int64_t> dm_factors = repeat_factor(2, m - 1);
    dm_factors.push_back(4);
    raw = expand_raw(raw_from_df(base), ws.dm(AbelianGroup(dm_factors)));
    const Subgroup& s3 = single_order3_member(base, what);
    std::size_t base_rank = base.group.rank();
    DifferenceFamily patch = df_chain_e1(ws, m, 2);
    std::vector<GroupElement> images;
    for (std::int64_t i = 0; i < m - 1; ++i) {
      images.push_back(unit_of(raw.group, base_rank + static_cast<std::size_t>(i)));
    }
    images.push_back(unit_of(raw.group, base_rank + static_cast<std::size_t>(m - 1)));  // order 4
    images.push_back(widen_left(raw.group, generator_of(s3), 0));
    patch_raw(raw, make_embedding(patch.group, raw.group, std::move(images)), patch, what);
    std::vector<std::int64_t> factors = repeat_factor(2, m - 1);
    factors.push_back(4);
    if (d == 9) {
      factors.push_back(3);
      factors.push_back(3);
    } else {
      factors.push_back(d);
    }
    target = group_of(std::move(factors));
  } else {
    std::int64_t n12 = pow2(ell) * d / 12;
    require_case(n12 >= 1 && pow2(ell) * d % 12 == 0, what + ": 12 does not divide 2^ell d");
    DifferenceFamily base = ws.ingredient(IngredientKind::kZ4xZ12n, n12);
    raw = expand_raw(raw_from_df(base), ws.dm(AbelianGroup(repeat_factor(2, m - 2))));
    const Subgroup& k3 = single_order3_member(base, what);
    std::size_t base_rank = base.group.rank();
    DifferenceFamily patch = df_chain_e1(ws, m - 2, 1);
    std::vector<GroupElement> images;
    for (std::int64_t i = 0; i < m - 2; ++i) {
      images.push_back(unit_of(raw.group, base_rank + static_cast<std::size_t>(i)));
    }
    images.push_back(widen_left(raw.group, generator_of(k3), 0));
    patch_raw(raw, make_embedding(patch.group, raw.group, std::move(images)), patch, what);
    std::vector<std::int64_t> factors = repeat_factor(2, m - 2);
    factors.push_back(4);
    factors.push_back(pow2(ell) * d);
    target = group_of(std::move(factors));
  }
  DifferenceFamily result = finalize_raw(transport_raw(raw, target, what), what);
  expect_type(result, pow2(m) - 1, 1, what);
  return result;
}

DifferenceFamily build_case_b_odd(Workspace& ws, std::int64_t m, std::int64_t ell,
                                  std::int64_t d) {
  std::string what = "build_case_b_odd(" + std::to_string(m) + "," + std::to_string(ell) + "," +
                     std::to_string(d) + ")";
  require_case(m >= 3 && m % 2 == 1 && ell >= 0 && d >= 9 && d % 18 == 9, what + ": bad parameters");
  std::int64_t u = d / 9;

  RawDf raw;
  AbelianGroup target;
  if (ell <= 1) {
    DifferenceFamily base = ws.ingredient(IngredientKind::kCyclic3Mod6, 3 * u);
    std::vector<std::int64_t> dm_factors;
    if (ell == 0) {
      dm_factors = repeat_factor(2, m);
      dm_factors.push_back(3);
    } else {
      dm_factors = repeat_factor(2, m - 1);
      dm_factors.push_back(12);
    }
    raw = expand_raw(raw_from_df(base), ws.dm(AbelianGroup(dm_factors)));
    const Subgroup& s3 = single_order3_member(base, what);
    std::size_t base_rank = base.group.rank();
    DifferenceFamily patch = ell == 0 ? df_chain_e2(ws, m, 1) : df_chain_e2(ws, m, 2);
    std::vector<GroupElement> images;
    if (ell == 0) {
      // patch factors: m twos, then 3, 3
      for (std::int64_t i = 0; i < m; ++i) {
        images.push_back(unit_of(raw.group, base_rank + static_cast<std::size_t>(i)));
      }
      images.push_back(unit_of(raw.group, base_rank + static_cast<std::size_t>(m)));
      images.push_back(widen_left(raw.group, generator_of(s3), 0));
    } else {
      // patch factors: m-1 twos, then 4, 3, 3; split the Z_12 slot by CRT
      std::size_t z12 = base_rank + static_cast<std::size_t>(m - 1);
      for (std::int64_t i = 0; i < m - 1; ++i) {
        images.push_back(unit_of(raw.group, base_rank + static_cast<std::size_t>(i)));
      }
      images.push_back(raw.group.mul(3, unit_of(raw.group, z12)));  // order 4
      images.push_back(raw.group.mul(4, unit_of(raw.group, z12)));  // order 3
      images.push_back(widen_left(raw.group, generator_of(s3), 0));
    }
    patch_raw(raw, make_embedding(patch.group, raw.group, std::move(images)), patch, what);

    std::vector<std::int64_t> factors = repeat_factor(2, ell == 0 ? m : m - 1);
    factors.push_back(ell == 0 ? 3 : 12);
    if (u == 3) {
      factors.push_back(3);
      factors.push_back(3);
    } else {
      factors.push_back(3 * u);
    }
    target = group_of(std::move(factors));
  } else {
    std::int64_t n = pow2(ell) * u;
    require_case(n % 4 == 0, what + ": n = 2^ell u must be divisible by 4");
    DifferenceFamily base = ws.ingredient(IngredientKind::kZ3xZ6n, n);
    raw = expand_raw(raw_from_df(base), ws.dm(AbelianGroup(repeat_factor(2, m - 1))));
    std::size_t base_rank = base.group.rank();
    DifferenceFamily patch = df_chain_e1(ws, m - 1, 1);
    for (const Subgroup* k3 : order3_members(base)) {
      std::vector<GroupElement> images;
      for (std::int64_t i = 0; i < m - 1; ++i) {
        images.push_back(unit_of(raw.group, base_rank + static_cast<std::size_t>(i)));
      }
      images.push_back(widen_left(raw.group, generator_of(*k3), 0));
      patch_raw(raw, make_embedding(patch.group, raw.group, std::move(images)), patch, what);
    }
    std::vector<std::int64_t> factors = repeat_factor(2, m - 1);
    factors.push_back(3);
    factors.push_back(pow2(ell + 1) * d / 3);
    target = group_of(std::move(factors));
  }
  DifferenceFamily result = finalize_raw(transport_raw(raw, target, what), what);
  expect_type(result, pow2(m) - 1, 2, what);
  return result;
}

DifferenceFamily build_df(Workspace& ws, const CaseDecomposition& dec) {
  DifferenceFamily df;
  switch (dec.tag) {
    case CaseTag::kA: df = build_case_a(ws, dec.m, dec.ell, dec.d); break;
    case CaseTag::kBEven: df = build_case_b_even(ws, dec.m, dec.ell, dec.d); break;
    case CaseTag::kBOdd: df = build_case_b_odd(ws, dec.m, dec.ell, dec.d); break;
  }
  if (df.group.order() != pow2(dec.m + dec.ell) * dec.d) {
    throw VerifyError("constructed group has the wrong order");
  }
  SpreadType t = spread_type(df.spread);
  if (t.order3 != dec.e_expected) {
    throw VerifyError("constructed e=" + std::to_string(t.order3) + " but the case expects e=" +
                      std::to_string(dec.e_expected));
  }
  return df;
}

}  // namespace pyrsts
