#include <gtest/gtest.h>

#include <random>

#include "support/fixtures.hpp"
#include "tlt/table.hpp"

using namespace tlt;

TEST(Coerce, Numbers) {
  EXPECT_EQ(coerce_cell("52500"), TypedValue::num(52500));
  EXPECT_EQ(coerce_cell("-3.5"), TypedValue::num(-3.5));
  EXPECT_EQ(coerce_cell("+7"), TypedValue::num(7));
  EXPECT_EQ(coerce_cell("1,234,567"), TypedValue::num(1234567));
  EXPECT_EQ(coerce_cell("12.5%"), TypedValue::num(12.5));
  EXPECT_EQ(coerce_cell(" 42 "), TypedValue::num(42));
  EXPECT_EQ(coerce_cell(".5"), TypedValue::num(0.5));
  EXPECT_EQ(coerce_cell("1,23"), TypedValue::text("1,23"));
}

TEST(Coerce, TextStaysText) {
  EXPECT_EQ(coerce_cell(""), TypedValue::text(""));
  EXPECT_EQ(coerce_cell("w 23-17"), TypedValue::text("w 23-17"));
  EXPECT_EQ(coerce_cell("new york giants"), TypedValue::text("new york giants"));
  EXPECT_EQ(coerce_cell("1,234 km"), TypedValue::text("1,234 km"));
}

TEST(Coerce, Dates) {
  // a bare year is numeric first
  EXPECT_EQ(coerce_cell("1979"), TypedValue::num(1979));
  EXPECT_EQ(coerce_cell("1979-09-02"), TypedValue::date({1979, 9, 2}));
  EXPECT_EQ(coerce_cell("September 2, 1979"), TypedValue::date({1979, 9, 2}));
  EXPECT_EQ(coerce_cell("september 2 1979"), TypedValue::date({1979, 9, 2}));
  EXPECT_EQ(coerce_cell("2 SEPTEMBER 1979"), TypedValue::date({1979, 9, 2}));
  EXPECT_TRUE(coerce_cell("1979-02-30").is_text());
  EXPECT_TRUE(coerce_cell("2, September 1979").is_text());
  EXPECT_TRUE(coerce_cell("sept 2").is_text());
}

TEST(Coerce, NumericContext) {
  EXPECT_EQ(numeric_context("1,234 km"), 1234.0);
  EXPECT_EQ(numeric_context("w 23-17"), 23.0);
  EXPECT_EQ(numeric_context("-4 pts"), -4.0);
  EXPECT_EQ(numeric_context("ab-4"), 4.0);
  EXPECT_EQ(numeric_context("3.25 s"), 3.25);
  EXPECT_FALSE(numeric_context("withdrew").has_value());
  EXPECT_FALSE(numeric_context("").has_value());
}

TEST(Coerce, PureFunction) {
  std::mt19937 rng(3);
  const std::string alphabet = "0123456789,.-+% abjanmay";
  for (int i = 0; i < 2000; ++i) {
    std::string s;
    int n = std::uniform_int_distribution<int>(0, 12)(rng);
    for (int k = 0; k < n; ++k) s += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
    auto a = coerce_cell(s), b = coerce_cell(std::string(s));
    ASSERT_EQ(a, b) << s;
    if (a.is_num()) { ASSERT_TRUE(std::isfinite(a.as_num())) << s; }
  }
}

TEST(Table, ColumnValuesEagles) {
  const auto& t = tlt::testing::eagles_table();
  auto vals = column_values(t, "attendance", t.all_positions());
  std::vector<double> got;
  for (auto& [row, v] : vals) {
    ASSERT_TRUE(v.is_num());
    got.push_back(v.as_num());
  }
  EXPECT_EQ(got, (std::vector<double>{67000, 39700, 54000, 27500, 61500}));
  EXPECT_TRUE(column_values(t, "result", {}).empty());
  auto some = column_values(t, "result", {1, 3});
  ASSERT_EQ(some.size(), 2u);
  EXPECT_EQ(some[1].first, 3u);
  EXPECT_EQ(some[1].second, TypedValue::text("w 17-13"));
}

TEST(Table, UnknownColumn) {
  const auto& t = tlt::testing::eagles_table();
  try {
    column_values(t, "crowd", t.all_positions());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnknownColumn);
  }
}

TEST(Table, DuplicateColumnsResolveToFirst) {
  auto t = tlt::testing::make_table({"a", "b", "a"}, {{"1", "2", "3"}});
  EXPECT_EQ(t.column_index("a"), 0u);
  EXPECT_EQ(t.column_index(" a "), 0u);
  EXPECT_FALSE(t.column_index("c").has_value());
}

TEST(Table, RaggedRowsRejected) {
  auto t = tlt::testing::make_table({"a", "b"}, {{"1", "2"}, {"3"}});
  EXPECT_THROW(t.check(), Error);
}

TEST(Table, DisplayFormatting) {
  EXPECT_EQ(to_display(TypedValue::num(52500)), "52500");
  EXPECT_EQ(to_display(TypedValue::num(0.5)), "0.5");
  EXPECT_EQ(to_display(TypedValue::date({1979, 9, 2})), "1979-09-02");
  EXPECT_EQ(to_display(TypedValue::boolean(true)), "true");
  EXPECT_EQ(to_display(TypedValue::view({0, 2})), "rows [0,2]");
}

TEST(Table, EaglesLoaded) {
  const auto& t = tlt::testing::eagles_table();
  EXPECT_EQ(t.caption, "1979 philadelphia eagles season");
  EXPECT_EQ(t.row_count(), 5u);
  EXPECT_EQ(t.column_count(), 3u);
}
