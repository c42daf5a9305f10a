#include "pyrsts/diff_family.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace pyrsts {

namespace {
constexpr std::size_t kReportCap = 24;
}

Triple Triple::of(const AbelianGroup& g, const GroupElement& a, const GroupElement& b,
                  const GroupElement& c) {
  g.require_element(a);
  g.require_element(b);
  g.require_element(c);
  Triple t{{a, b, c}};
  std::sort(t.points.begin(), t.points.end());
  if (t.points[0] == t.points[1] || t.points[1] == t.points[2]) {
    throw Error("triple elements must be pairwise distinct");
  }
  return t;
}

std::array<GroupElement, 6> delta(const AbelianGroup& g, const Triple& t) {
  const auto& [a, b, c] = t.points;
  GroupElement ab = g.sub(a, b), ac = g.sub(a, c), bc = g.sub(b, c);
  return {ab, g.neg(ab), ac, g.neg(ac), bc, g.neg(bc)};
}

std::string SpreadType::to_string() const {
  std::string out;
  auto append = [&out](std::int64_t order, std::int64_t count) {
    if (!out.empty()) out += ',';
    out += std::to_string(order) + "^" + std::to_string(count);
  };
  if (order2 > 0) append(2, order2);
  if (order3 > 0) append(3, order3);
  std::int64_t run_order = 0, run_count = 0;
  for (std::int64_t o : other) {
    if (o == run_order) {
      ++run_count;
    } else {
      if (run_order) append(run_order, run_count);
      run_order = o;
      run_count = 1;
    }
  }
  if (run_order) append(run_order, run_count);
  return out.empty() ? "none" : out;
}

SpreadType SpreadType::parse(std::string_view text) {
  SpreadType st;
  auto fail = [&] { throw Error("cannot parse spread type '" + std::string(text) + "'"); };
  std::string s(text);
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == ' ' || c == '\t'; }),
          s.end());
  if (s.empty() || s == "none") return st;
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t pos = s.find(',', start);
    if (pos == std::string::npos) pos = s.size();
    std::string part = s.substr(start, pos - start);
    if (part.empty()) fail();
    std::int64_t order = 0, count = 1;
    std::size_t caret = part.find('^');
    auto to_int = [&](const std::string& p) {
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), v);
      if (ec != std::errc() || ptr != p.data() + p.size()) fail();
      return v;
    };
    if (caret == std::string::npos) {
      order = to_int(part);
    } else {
      order = to_int(part.substr(0, caret));
      count = to_int(part.substr(caret + 1));
    }
    if (order < 2 || count < 0) fail();
    if (order == 2) {
      st.order2 += count;
    } else if (order == 3) {
      st.order3 += count;
    } else {
      for (std::int64_t i = 0; i < count; ++i) st.other.push_back(order);
    }
    start = pos + 1;
    if (pos == s.size()) break;
  }
  std::sort(st.other.begin(), st.other.end());
  return st;
}

SpreadType spread_type(const PartialSpread& spread) {
  SpreadType st;
  for (const auto& member : spread.members) {
    switch (member.order()) {
      case 1: break;  // trivial member carries no information
      case 2: ++st.order2; break;
      case 3: ++st.order3; break;
      default: st.other.push_back(member.order());
    }
  }
  std::sort(st.other.begin(), st.other.end());
  return st;
}

std::vector<char> hole_mask(const AbelianGroup& g, const PartialSpread& spread) {
  std::vector<char> mask(static_cast<std::size_t>(g.order()), 0);
  mask[static_cast<std::size_t>(g.pack(g.zero()))] = 1;
  for (const auto& member : spread.members) {
    if (!(member.parent() == g)) throw Error("spread member belongs to a different group");
    for (const auto& e : member.elements()) {
      mask[static_cast<std::size_t>(g.pack(e))] = 1;
    }
  }
  return mask;
}

std::int64_t hole_count(const std::vector<char>& mask) {
  return std::count(mask.begin(), mask.end(), char(1));
}

DfCheck verify_relative_df(const DifferenceFamily& df) {
  DfCheck check;
  const AbelianGroup& g = df.group;

  check.spread_ok = true;
  for (std::size_t i = 0; i < df.spread.members.size(); ++i) {
    for (std::size_t j = i + 1; j < df.spread.members.size(); ++j) {
      if (!df.spread.members[i].intersects_trivially(df.spread.members[j])) {
        check.spread_ok = false;
        if (check.problems.size() < kReportCap) {
          check.problems.push_back("spread members " + std::to_string(i) + " and " +
                                   std::to_string(j) + " intersect nontrivially");
        }
      }
    }
  }

  std::vector<char> holes = hole_mask(g, df.spread);
  std::vector<std::int32_t> count(static_cast<std::size_t>(g.order()), 0);
  for (const auto& t : df.base_blocks) {
    for (const auto& d : delta(g, t)) {
      ++count[static_cast<std::size_t>(g.pack(d))];
    }
  }

  check.delta_ok = true;
  for (std::int64_t key = 0; key < g.order(); ++key) {
    auto k = static_cast<std::size_t>(key);
    std::int32_t expected = holes[k] ? 0 : 1;
    if (count[k] == expected) continue;
    check.delta_ok = false;
    if (count[k] < expected) {
      ++check.missing_count;
      if (check.missing.size() < kReportCap) check.missing.push_back(g.unpack(key));
    } else {
      ++check.duplicate_count;
      if (check.duplicated.size() < kReportCap) check.duplicated.push_back(g.unpack(key));
    }
  }
  if (check.missing_count) {
    check.problems.push_back(std::to_string(check.missing_count) + " differences missing");
  }
  if (check.duplicate_count) {
    check.problems.push_back(std::to_string(check.duplicate_count) +
                             " differences covered more than once or inside the spread");
  }
  check.pass = check.spread_ok && check.delta_ok;
  return check;
}

std::string DfCheck::summary() const {
  if (pass) return "PASS";
  std::ostringstream os;
  os << "FAIL:";
  for (const auto& p : problems) os << ' ' << p << ';';
  return os.str();
}

std::optional<PartialSpread> prime_spread_from_holes(const AbelianGroup& g,
                                                     const std::vector<char>& mask,
                                                     std::string* error) {
  auto fail = [&](const std::string& msg) -> std::optional<PartialSpread> {
    if (error) *error = msg;
    return std::nullopt;
  };
  if (mask.size() != static_cast<std::size_t>(g.order())) return fail("hole mask has wrong size");
  if (!mask[static_cast<std::size_t>(g.pack(g.zero()))]) return fail("hole set must contain zero");

  PartialSpread spread;
  std::vector<char> seen(mask.size(), 0);
  for (std::int64_t key = 0; key < g.order(); ++key) {
    if (!mask[static_cast<std::size_t>(key)] || key == g.pack(g.zero())) continue;
    if (seen[static_cast<std::size_t>(key)]) continue;
    GroupElement e = g.unpack(key);
    std::int64_t ord = g.element_order(e);
    if (ord != 2 && ord != 3) {
      return fail("hole element " + g.format_element(e) + " has order " + std::to_string(ord) +
                  ", not 2 or 3");
    }
    Subgroup s = cyclic_subgroup(g, e);
    for (const auto& x : s.elements()) {
      auto k = static_cast<std::size_t>(g.pack(x));
      if (!mask[k]) {
        return fail("hole set is not a union of subgroups near " + g.format_element(x));
      }
      seen[k] = 1;
    }
    spread.members.push_back(std::move(s));
  }
  std::sort(spread.members.begin(), spread.members.end(),
            [](const Subgroup& a, const Subgroup& b) {
              if (a.order() != b.order()) return a.order() < b.order();
              return a.elements() < b.elements();
            });
  return spread;
}

DifferenceFamily canonicalized(DifferenceFamily df) {
  std::sort(df.base_blocks.begin(), df.base_blocks.end());
  std::sort(df.spread.members.begin(), df.spread.members.end(),
            [](const Subgroup& a, const Subgroup& b) { return a.elements() < b.elements(); });
  return df;
}

}  // namespace pyrsts
