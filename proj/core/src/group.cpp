#include "pyrsts/group.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace pyrsts {

namespace {

constexpr std::int64_t kMaxEnumerable = 1 << 22;

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  if (a != 0 && b > std::numeric_limits<std::int64_t>::max() / a) {
    throw Error("group order overflows int64");
  }
  return a * b;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) pos = text.size();
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
    if (pos == text.size()) break;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::int64_t parse_int(std::string_view s, const char* what) {
  s = trim(s);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(std::string("cannot parse ") + what + " from '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) return false;
  }
  return true;
}

AbelianGroup::AbelianGroup(std::vector<std::int64_t> factors) : factors_(std::move(factors)) {
  order_ = 1;
  for (std::int64_t n : factors_) {
    if (n < 2) throw Error("cyclic factors must be >= 2 (use an empty list for the trivial group)");
    order_ = checked_mul(order_, n);
  }
}

AbelianGroup AbelianGroup::cyclic(std::int64_t n) {
  if (n == 1) return AbelianGroup();
  return AbelianGroup(std::vector<std::int64_t>{n});
}

AbelianGroup AbelianGroup::parse(std::string_view text) {
  text = trim(text);
  if (text.empty() || text == "1") return AbelianGroup();
  std::vector<std::int64_t> factors;
  for (auto part : split(text, ',')) {
    factors.push_back(parse_int(part, "group factor"));
  }
  return AbelianGroup(std::move(factors));
}

std::string AbelianGroup::descriptor() const {
  if (factors_.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(factors_[i]);
  }
  return out;
}

GroupElement AbelianGroup::zero() const {
  GroupElement e;
  e.coords.assign(factors_.size(), 0);
  return e;
}

GroupElement AbelianGroup::make(std::span<const std::int64_t> coords) const {
  if (coords.size() != factors_.size()) throw Error("element has wrong number of coordinates");
  GroupElement e;
  e.coords.resize(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    std::int64_t c = coords[i] % factors_[i];
    if (c < 0) c += factors_[i];
    e.coords[i] = static_cast<std::int32_t>(c);
  }
  return e;
}

GroupElement AbelianGroup::make(std::initializer_list<std::int64_t> coords) const {
  return make(std::span<const std::int64_t>(coords.begin(), coords.size()));
}

bool AbelianGroup::shape_ok(const GroupElement& e) const {
  if (e.coords.size() != factors_.size()) return false;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (e.coords[i] < 0 || e.coords[i] >= factors_[i]) return false;
  }
  return true;
}

void AbelianGroup::require_element(const GroupElement& e) const {
  if (!shape_ok(e)) {
    throw Error("element does not belong to group " + descriptor());
  }
}

GroupElement AbelianGroup::add(const GroupElement& a, const GroupElement& b) const {
  require_element(a);
  require_element(b);
  GroupElement out;
  out.coords.resize(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    std::int64_t c = static_cast<std::int64_t>(a.coords[i]) + b.coords[i];
    if (c >= factors_[i]) c -= factors_[i];
    out.coords[i] = static_cast<std::int32_t>(c);
  }
  return out;
}

GroupElement AbelianGroup::sub(const GroupElement& a, const GroupElement& b) const {
  return add(a, neg(b));
}

GroupElement AbelianGroup::neg(const GroupElement& a) const {
  require_element(a);
  GroupElement out;
  out.coords.resize(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    out.coords[i] = a.coords[i] == 0 ? 0 : static_cast<std::int32_t>(factors_[i] - a.coords[i]);
  }
  return out;
}

GroupElement AbelianGroup::mul(std::int64_t k, const GroupElement& a) const {
  require_element(a);
  GroupElement out;
  out.coords.resize(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    std::int64_t c = (k % factors_[i]) * a.coords[i] % factors_[i];
    if (c < 0) c += factors_[i];
    out.coords[i] = static_cast<std::int32_t>(c);
  }
  return out;
}

std::int64_t AbelianGroup::element_order(const GroupElement& a) const {
  require_element(a);
  std::int64_t ord = 1;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    std::int64_t o = factors_[i] / std::gcd<std::int64_t>(factors_[i], a.coords[i]);
    ord = std::lcm(ord, o);
  }
  return ord;
}

std::int64_t AbelianGroup::pack(const GroupElement& e) const {
  require_element(e);
  std::int64_t key = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    key = key * factors_[i] + e.coords[i];
  }
  return key;
}

GroupElement AbelianGroup::unpack(std::int64_t key) const {
  if (key < 0 || key >= order_) throw Error("packed key out of range");
  GroupElement e;
  e.coords.resize(factors_.size());
  for (std::size_t i = factors_.size(); i-- > 0;) {
    e.coords[i] = static_cast<std::int32_t>(key % factors_[i]);
    key /= factors_[i];
  }
  return e;
}

std::vector<GroupElement> AbelianGroup::elements() const {
  if (order_ > kMaxEnumerable) {
    throw Error("refusing to enumerate group of order " + std::to_string(order_));
  }
  std::vector<GroupElement> out;
  out.reserve(static_cast<std::size_t>(order_));
  GroupElement e = zero();
  for (std::int64_t k = 0; k < order_; ++k) {
    out.push_back(e);
    // increment mixed-radix counter, least significant digit last
    for (std::size_t i = factors_.size(); i-- > 0;) {
      if (++e.coords[i] < factors_[i]) break;
      e.coords[i] = 0;
    }
  }
  return out;
}

std::vector<std::int64_t> AbelianGroup::primary_decomposition() const {
  std::vector<std::int64_t> out;
  for (std::int64_t n : factors_) {
    for (std::int64_t p = 2; p * p <= n; ++p) {
      if (n % p == 0) {
        std::int64_t q = 1;
        while (n % p == 0) {
          n /= p;
          q *= p;
        }
        out.push_back(q);
      }
    }
    if (n > 1) out.push_back(n);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string AbelianGroup::format_element(const GroupElement& e) const {
  require_element(e);
  std::string out = "(";
  for (std::size_t i = 0; i < e.coords.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(e.coords[i]);
  }
  out += ')';
  return out;
}

GroupElement AbelianGroup::parse_element(std::string_view text) const {
  text = trim(text);
  if (!text.empty() && text.front() == '(' && text.back() == ')') {
    text = text.substr(1, text.size() - 2);
  }
  text = trim(text);
  std::vector<std::int64_t> coords;
  if (!text.empty()) {
    for (auto part : split(text, ',')) coords.push_back(parse_int(part, "coordinate"));
  }
  if (coords.size() != factors_.size()) {
    throw Error("element '" + std::string(text) + "' has wrong arity for group " + descriptor());
  }
  return make(coords);
}

std::vector<GroupElement> involutions(const AbelianGroup& g) {
  // The involutions live in the product of the order-2 subgroups of the even
  // factors, so only 2^m candidates need to be scanned.
  std::vector<std::size_t> even;
  for (std::size_t i = 0; i < g.factors().size(); ++i) {
    if (g.factors()[i] % 2 == 0) even.push_back(i);
  }
  std::vector<GroupElement> out;
  for (std::uint64_t mask = 1; mask < (1ull << even.size()); ++mask) {
    GroupElement e = g.zero();
    for (std::size_t j = 0; j < even.size(); ++j) {
      if (mask & (1ull << j)) {
        e.coords[even[j]] = static_cast<std::int32_t>(g.factors()[even[j]] / 2);
      }
    }
    out.push_back(e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Subgroup::Subgroup(AbelianGroup parent, std::vector<GroupElement> elements)
    : parent_(std::move(parent)), elements_(std::move(elements)) {
  if (elements_.empty()) throw Error("subgroup cannot be empty");
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
  for (const auto& e : elements_) parent_.require_element(e);
  if (!contains(parent_.zero())) throw Error("subgroup must contain zero");
  for (const auto& a : elements_) {
    if (!contains(parent_.neg(a))) throw Error("subgroup not closed under negation");
    for (const auto& b : elements_) {
      if (!contains(parent_.add(a, b))) throw Error("subgroup not closed under addition");
    }
  }
  if (parent_.order() % order() != 0) throw Error("subgroup order does not divide group order");
}

Subgroup Subgroup::trivial(const AbelianGroup& parent) {
  return Subgroup(parent, {parent.zero()});
}

Subgroup Subgroup::generated_by(const AbelianGroup& parent,
                                std::span<const GroupElement> generators) {
  std::set<GroupElement> closure;
  closure.insert(parent.zero());
  std::vector<GroupElement> frontier(closure.begin(), closure.end());
  while (!frontier.empty()) {
    std::vector<GroupElement> next;
    for (const auto& e : frontier) {
      for (const auto& gen : generators) {
        GroupElement s = parent.add(e, gen);
        if (closure.insert(s).second) next.push_back(s);
      }
    }
    frontier = std::move(next);
    if (closure.size() > static_cast<std::size_t>(parent.order())) {
      throw Error("subgroup closure exceeded group order");  // unreachable
    }
  }
  return Subgroup(parent, std::vector<GroupElement>(closure.begin(), closure.end()));
}

bool Subgroup::contains(const GroupElement& e) const {
  return std::binary_search(elements_.begin(), elements_.end(), e);
}

bool Subgroup::intersects_trivially(const Subgroup& other) const {
  std::size_t i = 0, j = 0, common = 0;
  while (i < elements_.size() && j < other.elements_.size()) {
    if (elements_[i] < other.elements_[j]) {
      ++i;
    } else if (other.elements_[j] < elements_[i]) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  return common == 1;  // only zero in common
}

Subgroup cyclic_subgroup(const AbelianGroup& g, const GroupElement& e) {
  g.require_element(e);
  std::vector<GroupElement> elems;
  GroupElement cur = g.zero();
  do {
    elems.push_back(cur);
    cur = g.add(cur, e);
  } while (!(cur == g.zero()));
  return Subgroup(g, std::move(elems));
}

std::vector<Subgroup> sigma(const Subgroup& h) {
  const AbelianGroup& g = h.parent();
  std::set<std::vector<GroupElement>> seen;
  std::vector<Subgroup> out;
  for (const auto& e : h.elements()) {
    std::int64_t ord = g.element_order(e);
    if (ord < 2 || !is_prime(ord)) continue;
    Subgroup s = cyclic_subgroup(g, e);
    if (seen.insert(s.elements()).second) out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.elements() < b.elements();
  });
  return out;
}

std::vector<Subgroup> order_p_subgroups(const AbelianGroup& g, std::int64_t p) {
  std::set<std::vector<GroupElement>> seen;
  std::vector<Subgroup> out;
  for (const auto& e : g.elements()) {
    if (g.element_order(e) != p) continue;
    Subgroup s = cyclic_subgroup(g, e);
    if (seen.insert(s.elements()).second) out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end(),
            [](const Subgroup& a, const Subgroup& b) { return a.elements() < b.elements(); });
  return out;
}

Isomorphism::Isomorphism(AbelianGroup from, AbelianGroup to, std::vector<GroupElement> unit_images)
    : from_(std::move(from)), to_(std::move(to)), unit_images_(std::move(unit_images)) {
  if (unit_images_.size() != from_.rank()) throw Error("isomorphism needs one image per factor");
  for (const auto& im : unit_images_) to_.require_element(im);
}

GroupElement Isomorphism::apply(const GroupElement& e) const {
  from_.require_element(e);
  GroupElement out = to_.zero();
  for (std::size_t i = 0; i < unit_images_.size(); ++i) {
    out = to_.add(out, to_.mul(e.coords[i], unit_images_[i]));
  }
  return out;
}

namespace {

struct PrimaryPart {
  std::int64_t prime_power;
  std::size_t factor_index;
};

std::vector<PrimaryPart> primary_parts(const AbelianGroup& g) {
  std::vector<PrimaryPart> parts;
  for (std::size_t i = 0; i < g.factors().size(); ++i) {
    std::int64_t n = g.factors()[i];
    for (std::int64_t p = 2; p * p <= n; ++p) {
      if (n % p == 0) {
        std::int64_t q = 1;
        while (n % p == 0) {
          n /= p;
          q *= p;
        }
        parts.push_back({q, i});
      }
    }
    if (n > 1) parts.push_back({n, i});
  }
  std::stable_sort(parts.begin(), parts.end(),
                   [](const PrimaryPart& a, const PrimaryPart& b) {
                     return a.prime_power < b.prime_power;
                   });
  return parts;
}

// Modular inverse for coprime arguments (moduli here are tiny).
std::int64_t inv_mod(std::int64_t a, std::int64_t m) {
  std::int64_t t = 0, new_t = 1, r = m, new_r = a % m;
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    std::tie(t, new_t) = std::pair(new_t, t - q * new_t);
    std::tie(r, new_r) = std::pair(new_r, r - q * new_r);
  }
  if (r != 1) throw Error("inverse does not exist");
  return ((t % m) + m) % m;
}

}  // namespace

std::optional<Isomorphism> isomorphism_to(const AbelianGroup& g, const AbelianGroup& h) {
  if (g.primary_decomposition() != h.primary_decomposition()) return std::nullopt;

  auto gparts = primary_parts(g);
  auto hparts = primary_parts(h);
  // Same multiset, same sort: pair componentwise.

  // For each target factor n_j, the residues contributed by the matched
  // primary parts are recombined with CRT. A source unit vector e_i reduces
  // to residue 1 in each primary part of factor i and 0 elsewhere.
  std::vector<GroupElement> unit_images;
  for (std::size_t i = 0; i < g.rank(); ++i) {
    std::vector<std::int64_t> coords(h.rank(), 0);
    for (std::size_t k = 0; k < gparts.size(); ++k) {
      if (gparts[k].factor_index != i) continue;
      // source residue of e_i modulo gparts[k].prime_power is 1
      std::size_t j = hparts[k].factor_index;
      std::int64_t q = hparts[k].prime_power;
      std::int64_t n = h.factors()[j];
      std::int64_t rest = n / q;
      // CRT basis element: 1 mod q, 0 mod rest.
      std::int64_t basis = rest * inv_mod(rest % q, q) % n;
      coords[j] = (coords[j] + basis) % n;
    }
    unit_images.push_back(h.make(coords));
  }
  return Isomorphism(g, h, std::move(unit_images));
}

}  // namespace pyrsts
