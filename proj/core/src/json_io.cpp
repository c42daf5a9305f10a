#include "pyrsts/json_io.hpp"

#include <algorithm>

#include "pyrsts/pyramidal.hpp"

namespace pyrsts {

namespace {

ordered_json element_to_json(const GroupElement& e) {
  ordered_json j = ordered_json::array();
  for (auto c : e.coords) j.push_back(c);
  return j;
}

GroupElement element_from_json(const AbelianGroup& g, const ordered_json& j) {
  if (!j.is_array()) throw Error("element must be a JSON array");
  std::vector<std::int64_t> coords;
  for (const auto& c : j) coords.push_back(c.get<std::int64_t>());
  return g.make(coords);
}

AbelianGroup group_from_json(const ordered_json& j) {
  if (!j.contains("group") || !j["group"].is_array()) throw Error("missing group factor list");
  std::vector<std::int64_t> factors;
  for (const auto& f : j["group"]) factors.push_back(f.get<std::int64_t>());
  return AbelianGroup(std::move(factors));
}

}  // namespace

ordered_json df_to_json(const DifferenceFamily& df_in) {
  DifferenceFamily df = canonicalized(df_in);
  ordered_json j;
  j["group"] = df.group.factors();
  ordered_json spread = ordered_json::array();
  for (const auto& member : df.spread.members) {
    if (member.order() == 1) continue;  // zero is an implicit hole
    ordered_json elems = ordered_json::array();
    for (const auto& e : member.elements()) elems.push_back(element_to_json(e));
    spread.push_back(std::move(elems));
  }
  j["spread"] = std::move(spread);
  ordered_json blocks = ordered_json::array();
  for (const auto& t : df.base_blocks) {
    ordered_json b = ordered_json::array();
    for (const auto& p : t.points) b.push_back(element_to_json(p));
    blocks.push_back(std::move(b));
  }
  j["base_blocks"] = std::move(blocks);
  return j;
}

DifferenceFamily df_from_json(const ordered_json& j) {
  DifferenceFamily df;
  df.group = group_from_json(j);
  if (j.contains("spread")) {
    for (const auto& member : j["spread"]) {
      std::vector<GroupElement> elems;
      for (const auto& e : member) elems.push_back(element_from_json(df.group, e));
      df.spread.members.emplace_back(df.group, std::move(elems));
    }
  }
  if (!j.contains("base_blocks") || !j["base_blocks"].is_array()) {
    throw Error("missing base_blocks");
  }
  for (const auto& b : j["base_blocks"]) {
    if (b.size() != 3) throw Error("block must have 3 elements");
    df.base_blocks.push_back(Triple::of(df.group, element_from_json(df.group, b[0]),
                                        element_from_json(df.group, b[1]),
                                        element_from_json(df.group, b[2])));
  }
  return canonicalized(std::move(df));
}

namespace {

std::string point_to_string(const AbelianGroup& g, const PointRef& p) {
  if (p.fixed) return "F" + std::to_string(p.index);
  std::string out = "G(";
  for (std::size_t i = 0; i < p.g.coords.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(p.g.coords[i]);
  }
  out += ')';
  return out;
}

PointRef point_from_string(const AbelianGroup& g, const std::string& s) {
  if (s.empty()) throw Error("empty point");
  PointRef p;
  if (s[0] == 'F') {
    p.fixed = true;
    p.index = static_cast<std::int32_t>(std::stol(s.substr(1)));
    return p;
  }
  if (s[0] == 'G') {
    p.fixed = false;
    p.g = g.parse_element(s.substr(1));
    return p;
  }
  throw Error("point must start with F or G: '" + s + "'");
}

}  // namespace

ordered_json sts_to_json(const TripleSystem& sys) {
  ordered_json j;
  j["v"] = sys.v;
  j["f"] = sys.f;
  j["group"] = sys.group.factors();
  ordered_json blocks = ordered_json::array();
  std::vector<SystemBlock> sorted = sys.blocks;
  std::sort(sorted.begin(), sorted.end());
  for (const auto& b : sorted) {
    ordered_json arr = ordered_json::array();
    for (const auto& p : b.points) arr.push_back(point_to_string(sys.group, p));
    blocks.push_back(std::move(arr));
  }
  j["blocks"] = std::move(blocks);
  return j;
}

TripleSystem sts_from_json(const ordered_json& j) {
  TripleSystem sys;
  sys.group = group_from_json(j);
  if (!j.contains("v") || !j.contains("f")) throw Error("missing v or f");
  sys.v = j["v"].get<std::int64_t>();
  sys.f = j["f"].get<std::int64_t>();
  if (!j.contains("blocks") || !j["blocks"].is_array()) throw Error("missing blocks");
  for (const auto& b : j["blocks"]) {
    if (b.size() != 3) throw Error("block must have 3 points");
    SystemBlock blk;
    for (std::size_t i = 0; i < 3; ++i) {
      blk.points[i] = point_from_string(sys.group, b[i].get<std::string>());
    }
    std::sort(blk.points.begin(), blk.points.end());
    sys.blocks.push_back(std::move(blk));
  }
  std::sort(sys.blocks.begin(), sys.blocks.end());
  return sys;
}

ordered_json dm_to_json(const DifferenceMatrix& m) {
  ordered_json j;
  j["group"] = m.group.factors();
  ordered_json rows = ordered_json::array();
  for (const auto& row : m.rows) {
    ordered_json r = ordered_json::array();
    for (const auto& e : row) r.push_back(element_to_json(e));
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  return j;
}

DifferenceMatrix dm_from_json(const ordered_json& j) {
  DifferenceMatrix m;
  m.group = group_from_json(j);
  if (!j.contains("rows") || j["rows"].size() != 3) throw Error("DM needs exactly 3 rows");
  for (std::size_t r = 0; r < 3; ++r) {
    for (const auto& e : j["rows"][r]) m.rows[r].push_back(element_from_json(m.group, e));
  }
  return m;
}

std::string dump_json(const ordered_json& j) { return j.dump() + "\n"; }

}  // namespace pyrsts
