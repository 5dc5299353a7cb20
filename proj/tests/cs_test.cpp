#include <gtest/gtest.h>

#include <algorithm>
#include <cctype>
#include <random>

#include "support/fixtures.hpp"
#include "tlt/cs.hpp"

using namespace tlt;
using tlt::testing::eagles_table;
using tlt::testing::kEaglesLf;
using tlt::testing::make_table;

namespace {

CsCategory category_of(std::string_view lf, const Table& t, std::size_t i = 0) {
  auto cs = extract_cs(parse_lf(lf), t);
  EXPECT_GT(cs.size(), i);
  return cs.at(i).category;
}

const Table& scores() {
  static const Table t = make_table({"player", "score"}, {{"Ann Lee", "12"}, {"Bob", "7"}, {"Cid", "25"}});
  return t;
}

}  // namespace

TEST(Cs, Eagles) {
  auto cs = extract_cs(parse_lf(kEaglesLf), eagles_table());
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs[0], (CsValue{"w", CsCategory::TAB, {0, 0, 2}}));
  EXPECT_EQ(cs[1], (CsValue{"52500", CsCategory::INF, {1}}));
}

TEST(Cs, AuxThreshold) {
  // "All scores are bigger than 4."
  EXPECT_EQ(category_of("all_greater { all_rows ; score ; 4 }", scores()), CsCategory::AUX);
  EXPECT_EQ(category_of("all_greater { all_rows ; score ; 7 }", scores()), CsCategory::TAB);
}

TEST(Cs, WholeCellAndSubstringAreTab) {
  EXPECT_EQ(category_of("str_eq { str_hop_first { all_rows ; player } ; Bob }", scores()), CsCategory::TAB);
  EXPECT_EQ(category_of("str_eq { str_hop_first { all_rows ; player } ; lee }", scores()), CsCategory::TAB);
  EXPECT_EQ(category_of("str_eq { str_hop_first { all_rows ; player } ; ann   lee }", scores()), CsCategory::TAB);
  // numeric equality with a whole cell
  EXPECT_EQ(category_of("eq { num_hop_first { all_rows ; score } ; 12.0 }", scores()), CsCategory::TAB);
}

TEST(Cs, InferredValues) {
  EXPECT_EQ(category_of("eq { count { all_rows } ; 3 }", scores()), CsCategory::INF);
  EXPECT_EQ(category_of("eq { sum { all_rows ; score } ; 44 }", scores()), CsCategory::INF);
  // within round_eq tolerance of 44
  EXPECT_EQ(category_of("round_eq { sum { all_rows ; score } ; 47 }", scores()), CsCategory::INF);
  EXPECT_EQ(category_of("round_eq { sum { all_rows ; score } ; 52 }", scores()), CsCategory::AUX);
  EXPECT_EQ(category_of("eq { diff { num_hop_first { all_rows ; score } ; 2 } ; 10 }", scores(), 1),
            CsCategory::INF);
}

TEST(Cs, InfProbeOnlyLooksAtSiblingsOfEnclosingStat) {
  // 3 is the row count, but the sibling of the literal is a View filter, not N/Obj
  EXPECT_EQ(category_of("most_greater { all_rows ; score ; 3 }", scores()), CsCategory::AUX);
  // inside `and`, each comparison is probed on its own
  auto cs = extract_cs(parse_lf("and { eq { count { all_rows } ; 3 } ; eq { max { all_rows ; score } ; 3 } }"),
                       scores());
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs[0].category, CsCategory::INF);
  EXPECT_EQ(cs[1].category, CsCategory::AUX);
}

TEST(Cs, ProbeErrorsFallToAux) {
  std::vector<std::string> warnings;
  auto cs = extract_cs(parse_lf("eq { avg { filter_str_eq { all_rows ; player ; zed } ; score } ; 99 }"), scores(), {},
                       &warnings);
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs[1].category, CsCategory::AUX);
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(Cs, OneValuePerOccurrence) {
  auto cs = extract_cs(parse_lf("and { eq { count { all_rows } ; 3 } ; eq { 3 ; count { all_rows } } }"), scores());
  ASSERT_EQ(cs.size(), 2u);
  EXPECT_NE(cs[0].source_path, cs[1].source_path);
}

TEST(Cs, TabInvariantToCellCase) {
  std::mt19937 rng(4);
  auto lf = parse_lf("str_eq { str_hop_first { all_rows ; player } ; ann lee }");
  for (int i = 0; i < 50; ++i) {
    Table t = scores();
    for (auto& row : t.rows)
      for (auto& c : row)
        for (auto& ch : c)
          if (rng() % 2) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    EXPECT_EQ(extract_cs(lf, t).at(0).category, CsCategory::TAB);
  }
}

TEST(Cs, Deterministic) {
  auto lf = parse_lf(kEaglesLf);
  EXPECT_EQ(extract_cs(lf, eagles_table()), extract_cs(lf, eagles_table()));
}

TEST(CsDistribution, SingleEaglesRecord) {
  DatasetRecord r;
  r.table = eagles_table();
  r.logic_str = kEaglesLf;
  auto d = cs_distribution({r});
  EXPECT_FALSE(d.empty);
  EXPECT_DOUBLE_EQ(d.tab, 0.5);
  EXPECT_DOUBLE_EQ(d.inf, 0.5);
  EXPECT_DOUBLE_EQ(d.aux, 0.0);
  EXPECT_EQ(d.values, 2u);
}

TEST(CsDistribution, Empty) {
  auto d = cs_distribution({});
  EXPECT_TRUE(d.empty);
  EXPECT_EQ(d.tab + d.inf + d.aux, 0.0);
}

TEST(CsDistribution, FixtureSumsToOne) {
  auto recs = load_dataset(tlt::testing::fixture_path(), Split::dev);
  auto d = cs_distribution(recs);
  EXPECT_EQ(d.records, 50u);
  EXPECT_EQ(d.records_skipped, 0u);
  EXPECT_NEAR(d.tab + d.inf + d.aux, 1.0, 1e-9);
  EXPECT_NEAR(d.unique_tab + d.unique_inf + d.unique_aux, 1.0, 1e-9);
  EXPECT_GT(d.tab, d.inf);
  EXPECT_LE(d.unique_values, d.values);
}

TEST(Cs, CategoryNames) {
  EXPECT_EQ(cs_category_from_string("tab"), CsCategory::TAB);
  EXPECT_EQ(cs_category_from_string(" INF "), CsCategory::INF);
  EXPECT_FALSE(cs_category_from_string("x").has_value());
  EXPECT_EQ(to_string(CsCategory::AUX), "AUX");
}
