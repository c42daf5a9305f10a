#include "pyrsts/sequences.hpp"

#include <gtest/gtest.h>

#include <array>
#include <set>

using namespace pyrsts;

TEST(LangfordAdmissible, Examples) {
  EXPECT_TRUE(is_langford_admissible(4, 6, 3));   // b odd, k even, a = 2 (mod 4)
  EXPECT_TRUE(is_langford_admissible(1, 0, 5));   // (a,k) = (0,1)
  EXPECT_FALSE(is_langford_admissible(2, 4, 1));  // b odd, k even needs a = 2,3 (mod 4)
  EXPECT_FALSE(is_langford_admissible(4, 2, 3));  // 2b-1 > a
  EXPECT_FALSE(is_langford_admissible(9, 3, 1));  // k > 2a+1
}

namespace {

bool parity_case_holds(std::int64_t k, std::int64_t a, std::int64_t b) {
  bool b_odd = b % 2 != 0, k_odd = k % 2 != 0;
  std::int64_t a4 = a % 4;
  if (b_odd && k_odd) return a4 == 0 || a4 == 1;
  if (b_odd && !k_odd) return a4 == 2 || a4 == 3;
  if (!b_odd && k_odd) return a4 == 0 || a4 == 3;
  return a4 == 1 || a4 == 2;
}

}  // namespace

// Exhaustive comparison for a <= 12, b <= 4. The predicate is sufficient:
// every admissible triple has a sequence. It is not necessary: eleven small
// triples below the 2b-1 <= a size bound still admit sequences. The parity
// case, by contrast, is necessary throughout.
TEST(LangfordAdmissible, ExhaustiveComparisonAgainstSearch) {
  const std::set<std::array<std::int64_t, 3>> sporadic = {
      {2, 1, 2}, {2, 2, 2}, {4, 2, 2},  {4, 3, 3},  {3, 4, 3}, {7, 4, 3},
      {6, 5, 4}, {4, 6, 4}, {6, 6, 4},  {8, 6, 4},  {10, 6, 4},
  };
  std::set<std::array<std::int64_t, 3>> extras;
  for (std::int64_t a = 0; a <= 12; ++a) {
    for (std::int64_t b = 1; b <= 4; ++b) {
      for (std::int64_t k = 1; k <= 2 * a + 1; ++k) {
        auto res = find_extended_langford(k, a, b, 50'000'000);
        ASSERT_NE(res.status, SearchStatus::kBudgetExceeded);
        bool exists = res.status == SearchStatus::kFound;
        if (exists) EXPECT_TRUE(langford_valid(res.seq));
        if (is_langford_admissible(k, a, b)) {
          EXPECT_TRUE(exists) << "(k,a,b)=(" << k << "," << a << "," << b << ")";
        } else if (exists) {
          extras.insert({k, a, b});
        }
        if (exists) {
          EXPECT_TRUE(parity_case_holds(k, a, b))
              << "(k,a,b)=(" << k << "," << a << "," << b << ")";
        }
      }
    }
  }
  EXPECT_EQ(extras, sporadic);
}

TEST(FindExtendedLangford, EmptyOrder) {
  auto res = find_extended_langford(1, 0, 3);
  ASSERT_EQ(res.status, SearchStatus::kFound);
  EXPECT_TRUE(res.seq.s.empty());
  EXPECT_TRUE(langford_valid(res.seq));
  EXPECT_TRUE(langford_triples(res.seq).empty());
}

TEST(FindExtendedLangford, SkolemExample) {
  auto res = find_extended_langford(9, 4, 1);
  ASSERT_EQ(res.status, SearchStatus::kFound);
  EXPECT_TRUE(langford_valid(res.seq));
  std::set<std::int64_t> covered;
  for (std::int64_t i = 1; i <= 4; ++i) {
    covered.insert(res.seq.s[static_cast<std::size_t>(i - 1)]);
    covered.insert(res.seq.s[static_cast<std::size_t>(i - 1)] + i);
  }
  std::set<std::int64_t> expected;
  for (std::int64_t p = 1; p <= 9; ++p) {
    if (p != 9) expected.insert(p);
  }
  EXPECT_EQ(covered, expected);
}

TEST(FindExtendedLangford, BudgetExceededIsNotAbsent) {
  auto res = find_extended_langford(5, 20, 2, 3);
  EXPECT_EQ(res.status, SearchStatus::kBudgetExceeded);
}

namespace {

std::multiset<std::int64_t> expected_delta(std::int64_t k, std::int64_t a, std::int64_t b) {
  std::multiset<std::int64_t> out;
  std::int64_t hole = k + a + b - 1;
  for (std::int64_t t = b; t <= 3 * a + b; ++t) {
    if (t == hole) continue;
    out.insert(t);
    out.insert(-t);
  }
  return out;
}

std::multiset<std::int64_t> triple_delta(const std::vector<std::array<std::int64_t, 3>>& ts) {
  std::multiset<std::int64_t> out;
  for (const auto& t : ts) {
    for (std::int64_t d : {t[0] - t[1], t[0] - t[2], t[1] - t[2]}) {
      out.insert(d);
      out.insert(-d);
    }
  }
  return out;
}

}  // namespace

TEST(LangfordTriples, DeltaIntervalExample) {
  auto res = find_extended_langford(4, 6, 3);
  ASSERT_EQ(res.status, SearchStatus::kFound);
  auto triples = langford_triples(res.seq);
  ASSERT_EQ(triples.size(), 6u);
  for (const auto& t : triples) EXPECT_EQ(t[0], 0);
  EXPECT_EQ(triple_delta(triples), expected_delta(4, 6, 3));
}

TEST(LangfordTriples, DeltaIntervalHoldsOnAdmissibleRange) {
  for (std::int64_t a = 0; a <= 20; ++a) {
    for (std::int64_t b = 1; b <= 4; ++b) {
      for (std::int64_t k = 1; k <= 2 * a + 1; ++k) {
        if (!is_langford_admissible(k, a, b)) continue;
        auto res = find_extended_langford(k, a, b);
        ASSERT_EQ(res.status, SearchStatus::kFound);
        EXPECT_EQ(triple_delta(langford_triples(res.seq)), expected_delta(k, a, b))
            << "(k,a,b)=(" << k << "," << a << "," << b << ")";
      }
    }
  }
}
