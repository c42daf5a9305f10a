#include "pyrsts/constructions.hpp"

#include <gtest/gtest.h>

#include <fstream>

#include "pyrsts/json_io.hpp"

using namespace pyrsts;

namespace {

std::int64_t expected_blocks(const DifferenceFamily& df) {
  return (df.group.order() - hole_count(hole_mask(df.group, df.spread))) / 6;
}

void expect_verified(const DifferenceFamily& df, std::int64_t blocks, const char* what) {
  auto check = verify_relative_df(df);
  EXPECT_TRUE(check.pass) << what << ": " << check.summary();
  EXPECT_EQ(static_cast<std::int64_t>(df.base_blocks.size()), blocks) << what;
  EXPECT_EQ(expected_blocks(df), blocks) << what;
}

}  // namespace

TEST(Solver, FanoPlane) {
  auto res = solve_relative_df(AbelianGroup({7}), PartialSpread{}, 1'000'000);
  ASSERT_EQ(res.status, SearchStatus::kFound);
  ASSERT_EQ(res.df->base_blocks.size(), 1u);
  AbelianGroup z7({7});
  EXPECT_EQ(res.df->base_blocks[0], Triple::of(z7, z7.make({0}), z7.make({1}), z7.make({3})));
}

TEST(Solver, ProvesAbsenceOverZ9RelativeZ3) {
  AbelianGroup z9({9});
  PartialSpread spread{{cyclic_subgroup(z9, z9.make({3}))}};
  auto res = solve_relative_df(z9, spread, 10'000'000);
  EXPECT_EQ(res.status, SearchStatus::kAbsent);
}

TEST(Solver, BudgetExceededIsDistinct) {
  AbelianGroup z31({31});
  auto res = solve_relative_df(z31, PartialSpread{}, 2);
  EXPECT_EQ(res.status, SearchStatus::kBudgetExceeded);
}

TEST(Solver, MatchesExplicitTableInstance) {
  DifferenceFamily table = df_over_z2x3_z3x2();
  auto res = solve_relative_df(table.group, table.spread, kDefaultSolverBudget);
  ASSERT_EQ(res.status, SearchStatus::kFound);
  EXPECT_TRUE(verify_relative_df(*res.df).pass);
  EXPECT_EQ(res.df->base_blocks.size(), table.base_blocks.size());
}

TEST(Ingredients, CyclicFamilies) {
  Workspace ws;
  DifferenceFamily fano = ingredient_df(ws, IngredientKind::kCyclic1Mod6, 7);
  expect_verified(fano, 1, "cyclic-1mod6(7)");

  DifferenceFamily trivial1 = ingredient_df(ws, IngredientKind::kCyclic1Mod6, 1);
  expect_verified(trivial1, 0, "cyclic-1mod6(1)");

  DifferenceFamily z3 = ingredient_df(ws, IngredientKind::kCyclic3Mod6, 3);
  expect_verified(z3, 0, "cyclic-3mod6(3)");
  EXPECT_EQ(spread_type(z3.spread).order3, 1);

  DifferenceFamily nine = ingredient_df(ws, IngredientKind::kCyclic3Mod6, 9);
  EXPECT_EQ(nine.group.descriptor(), "3,3");
  expect_verified(nine, 1, "cyclic-3mod6(9)");

  DifferenceFamily pr8 = ingredient_df(ws, IngredientKind::kCyclicRel2, 8);
  expect_verified(pr8, 1, "cyclic-rel2(8)");
  EXPECT_EQ(spread_type(pr8.spread).order2, 1);

  EXPECT_THROW(ingredient_df(ws, IngredientKind::kCyclic1Mod6, 8), Error);
  EXPECT_THROW(ingredient_df(ws, IngredientKind::kCyclicRel2, 14), Error);
}

TEST(Ingredients, SpreadFamilies) {
  Workspace ws;
  DifferenceFamily tp0 = ingredient_df(ws, IngredientKind::kZ2x2xOdd, 0);
  expect_verified(tp0, 1, "z2x2xodd(0)");
  SpreadType t0 = spread_type(tp0.spread);
  EXPECT_EQ(t0.order2, 3);
  EXPECT_EQ(t0.order3, 1);

  DifferenceFamily tp1 = ingredient_df(ws, IngredientKind::kZ2x2xOdd, 1);
  expect_verified(tp1, 5, "z2x2xodd(1)");

  DifferenceFamily q12 = ingredient_df(ws, IngredientKind::kZ4xZ12n, 1);
  expect_verified(q12, 7, "z4xz12n(1)");
  EXPECT_EQ(spread_type(q12.spread).order2, 3);
  EXPECT_EQ(spread_type(q12.spread).order3, 1);

  DifferenceFamily r24 = ingredient_df(ws, IngredientKind::kZ3xZ6n, 4);
  expect_verified(r24, 11, "z3xz6n(4)");
  EXPECT_EQ(spread_type(r24.spread).order2, 1);
  EXPECT_EQ(spread_type(r24.spread).order3, 2);
}

TEST(ExpandByDm, InflatesBlocksAndSpread) {
  Workspace ws;
  DifferenceFamily pr8 = ingredient_df(ws, IngredientKind::kCyclicRel2, 8);
  DifferenceMatrix k4 = ws.dm(AbelianGroup({2, 2}));
  DifferenceFamily big = expand_by_dm(pr8, k4);
  EXPECT_EQ(big.group.descriptor(), "8,2,2");
  EXPECT_EQ(big.base_blocks.size(), 4u);
  ASSERT_EQ(big.spread.members.size(), 1u);
  EXPECT_EQ(big.spread.members[0].order(), 8);  // Z_2 x K, elementary abelian
  auto check = verify_relative_df(big);
  EXPECT_TRUE(check.pass) << check.summary();
}

TEST(ExpandByDm, TrivialMatrixIsIdentity) {
  Workspace ws;
  DifferenceFamily pr8 = ingredient_df(ws, IngredientKind::kCyclicRel2, 8);
  DifferenceFamily same = expand_by_dm(pr8, ws.dm(AbelianGroup()));
  EXPECT_EQ(same.group, pr8.group);
  EXPECT_EQ(same.base_blocks, pr8.base_blocks);
}

TEST(ExpandByDm, EmptyFamilyInflatesSpreadOnly) {
  Workspace ws;
  DifferenceFamily z3 = ingredient_df(ws, IngredientKind::kCyclic3Mod6, 3);
  DifferenceFamily big = expand_by_dm(z3, ws.dm(AbelianGroup({2, 2})));
  EXPECT_TRUE(big.base_blocks.empty());
  ASSERT_EQ(big.spread.members.size(), 1u);
  EXPECT_EQ(big.spread.members[0].order(), 12);
  EXPECT_TRUE(verify_relative_df(big).pass);
}

TEST(ExpandByDm, RejectsInvalidInputs) {
  Workspace ws;
  DifferenceFamily pr8 = ingredient_df(ws, IngredientKind::kCyclicRel2, 8);
  DifferenceFamily broken = pr8;
  broken.base_blocks.clear();
  EXPECT_THROW(expand_by_dm(broken, ws.dm(AbelianGroup({2, 2}))), Error);

  DifferenceMatrix bad;
  bad.group = AbelianGroup({2});
  for (auto& row : bad.rows) row.assign(2, bad.group.zero());
  EXPECT_THROW(expand_by_dm(pr8, bad), Error);
}

TEST(Tables, BlockCountsAndTypes) {
  Workspace ws;
  expect_verified(df_over_z2x2_z4d(ws, 5), 12, "z2x2_z4d(5)");
  expect_verified(df_over_z2x2_z4d(ws, 11), 28, "z2x2_z4d(11)");
  expect_verified(df_over_z2x2_z4d(ws, 17), 44, "z2x2_z4d(17)");
  expect_verified(df_over_z2x3_z4d(ws, 5), 24, "z2x3_z4d(5)");
  expect_verified(df_over_z2x3_z4d(ws, 11), 56, "z2x3_z4d(11)");
  expect_verified(df_over_z2x3_z4d(ws, 17), 88, "z2x3_z4d(17)");
  expect_verified(df_over_z2x3_z4d(ws, 23), 120, "z2x3_z4d(23)");

  DifferenceFamily t413 = df_over_z2x3_z12();
  expect_verified(t413, 13, "z2x3_z12");
  SpreadType ty = spread_type(t413.spread);
  EXPECT_EQ(ty.order2, 15);
  EXPECT_EQ(ty.order3, 1);

  DifferenceFamily t309 = df_over_z2x3_z3x2();
  expect_verified(t309, 10, "z2x3_z3x2");
  EXPECT_EQ(spread_type(t309.spread).order2, 7);
  EXPECT_EQ(spread_type(t309.spread).order3, 2);

  expect_verified(df_over_z2x2_z3_z12(), 22, "z2x2_z3_z12");

  EXPECT_THROW(df_over_z2x2_z4d(ws, 7), Error);
  EXPECT_THROW(df_over_z2x3_z4d(ws, 9), Error);
}

TEST(Chains, InductionCounts) {
  Workspace ws;
  expect_verified(df_chain_e1(ws, 2, 1), 1, "chain_e1(2,1)");
  expect_verified(df_chain_e1(ws, 4, 1), 5, "chain_e1(4,1)");
  expect_verified(df_chain_e1(ws, 6, 1), 21, "chain_e1(6,1)");
  expect_verified(df_chain_e1(ws, 4, 2), 13, "chain_e1(4,2)");
  expect_verified(df_chain_e1(ws, 6, 2), 53, "chain_e1(6,2)");
  expect_verified(df_chain_e2(ws, 3, 1), 10, "chain_e2(3,1)");
  expect_verified(df_chain_e2(ws, 5, 1), 42, "chain_e2(5,1)");
  expect_verified(df_chain_e2(ws, 3, 2), 22, "chain_e2(3,2)");
  expect_verified(df_chain_e2(ws, 5, 2), 90, "chain_e2(5,2)");
  EXPECT_THROW(df_chain_e1(ws, 3, 1), Error);
  EXPECT_THROW(df_chain_e1(ws, 2, 2), Error);
  EXPECT_THROW(df_chain_e2(ws, 4, 1), Error);
}

TEST(Chains, StepCountEqualsFourTimesPreviousPlusPatches) {
  Workspace ws;
  auto prev1 = df_chain_e1(ws, 4, 1);
  auto next1 = df_chain_e1(ws, 6, 1);
  EXPECT_EQ(next1.base_blocks.size(), prev1.base_blocks.size() * 4 + 1);
  auto prev2 = df_chain_e2(ws, 3, 1);
  auto next2 = df_chain_e2(ws, 5, 1);
  EXPECT_EQ(next2.base_blocks.size(), prev2.base_blocks.size() * 4 + 2);
}

TEST(CaseBuilders, CaseA) {
  Workspace ws;
  DifferenceFamily a1 = build_case_a(ws, 3, 0, 1);
  expect_verified(a1, 0, "case_a(3,0,1)");
  EXPECT_EQ(a1.group.descriptor(), "2,2,2");

  DifferenceFamily a2 = build_case_a(ws, 3, 2, 1);
  expect_verified(a2, 4, "case_a(3,2,1)");
  EXPECT_EQ(a2.group.descriptor(), "2,2,8");

  DifferenceFamily a3 = build_case_a(ws, 4, 1, 5);
  expect_verified(a3, 24, "case_a(4,1,5)");
  EXPECT_EQ(a3.group.descriptor(), "2,2,2,20");

  DifferenceFamily a4 = build_case_a(ws, 3, 1, 5);  // trivial DM path
  expect_verified(a4, 12, "case_a(3,1,5)");
  EXPECT_EQ(a4.group.descriptor(), "2,2,20");

  DifferenceFamily a5 = build_case_a(ws, 5, 1, 5);
  expect_verified(a5, 48, "case_a(5,1,5)");

  EXPECT_THROW(build_case_a(ws, 3, 0, 3), Error);
  EXPECT_THROW(build_case_a(ws, 2, 0, 1), Error);
}

TEST(CaseBuilders, CaseBEven) {
  Workspace ws;
  DifferenceFamily b1 = build_case_b_even(ws, 4, 0, 3);
  expect_verified(b1, 5, "case_b_even(4,0,3)");
  EXPECT_EQ(b1.group.descriptor(), "2,2,2,2,3");

  DifferenceFamily b2 = build_case_b_even(ws, 4, 1, 9);
  expect_verified(b2, 45, "case_b_even(4,1,9)");
  EXPECT_EQ(b2.group.descriptor(), "2,2,2,4,3,3");

  DifferenceFamily b3 = build_case_b_even(ws, 4, 2, 3);
  expect_verified(b3, 29, "case_b_even(4,2,3)");
  EXPECT_EQ(b3.group.descriptor(), "2,2,4,12");

  DifferenceFamily b4 = build_case_b_even(ws, 4, 1, 3);
  expect_verified(b4, 13, "case_b_even(4,1,3)");

  EXPECT_THROW(build_case_b_even(ws, 3, 0, 3), Error);
  EXPECT_THROW(build_case_b_even(ws, 4, 0, 5), Error);
}

TEST(CaseBuilders, CaseBOdd) {
  Workspace ws;
  DifferenceFamily b1 = build_case_b_odd(ws, 3, 0, 9);
  expect_verified(b1, 10, "case_b_odd(3,0,9)");
  EXPECT_EQ(b1.group.descriptor(), "2,2,2,3,3");

  DifferenceFamily b2 = build_case_b_odd(ws, 3, 1, 9);
  expect_verified(b2, 22, "case_b_odd(3,1,9)");
  EXPECT_EQ(b2.group.descriptor(), "2,2,12,3");

  DifferenceFamily b3 = build_case_b_odd(ws, 3, 0, 27);
  expect_verified(b3, 34, "case_b_odd(3,0,27)");
  EXPECT_EQ(b3.group.descriptor(), "2,2,2,3,3,3");

  DifferenceFamily b4 = build_case_b_odd(ws, 3, 2, 9);
  expect_verified(b4, 46, "case_b_odd(3,2,9)");
  EXPECT_EQ(b4.group.descriptor(), "2,2,3,24");

  EXPECT_THROW(build_case_b_odd(ws, 4, 0, 9), Error);
  EXPECT_THROW(build_case_b_odd(ws, 3, 0, 3), Error);
}

TEST(CaseBuilders, DeterministicAcrossWorkspaces) {
  Workspace ws1, ws2;
  auto a = build_case_a(ws1, 4, 1, 5);
  auto b = build_case_a(ws2, 4, 1, 5);
  EXPECT_EQ(dump_json(df_to_json(a)), dump_json(df_to_json(b)));
}

TEST(Workspace, LangfordLogRecordsRequests) {
  Workspace ws;
  df_over_z2x2_z4d(ws, 11);
  auto reqs = ws.langford_requests();
  ASSERT_FALSE(reqs.empty());
  auto expected = std::tuple<std::int64_t, std::int64_t, std::int64_t>(4, 6, 3);
  EXPECT_TRUE(reqs.front() == expected);
}

TEST(Workspace, DiskCacheRoundTrip) {
  auto dir = std::filesystem::temp_directory_path() / "pyrsts-test-cache";
  std::filesystem::remove_all(dir);
  {
    Workspace ws(BuildOptions{}, DiskCache(dir));
    ingredient_df(ws, IngredientKind::kCyclicRel2, 32);
  }
  ASSERT_TRUE(std::filesystem::exists(dir / "df-cyclic-rel2-32.json"));
  {
    Workspace ws(BuildOptions{}, DiskCache(dir));
    DifferenceFamily df = ingredient_df(ws, IngredientKind::kCyclicRel2, 32);
    EXPECT_TRUE(verify_relative_df(df).pass);
    EXPECT_EQ(df.base_blocks.size(), 5u);
  }
  // corrupted cache entries are ignored and rebuilt
  {
    std::ofstream bad(dir / "df-cyclic-rel2-32.json");
    bad << "{not json";
  }
  {
    Workspace ws(BuildOptions{}, DiskCache(dir));
    EXPECT_TRUE(verify_relative_df(ingredient_df(ws, IngredientKind::kCyclicRel2, 32)).pass);
  }
  std::filesystem::remove_all(dir);
}
