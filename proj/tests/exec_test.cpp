#include <gtest/gtest.h>

#include <random>

#include "support/fixtures.hpp"
#include "tlt/exec.hpp"

using namespace tlt;
using tlt::testing::eagles_table;
using tlt::testing::kEaglesLf;
using tlt::testing::make_table;

namespace {

TypedValue value_of(std::string_view lf_text, const Path& path, const Table& t = eagles_table()) {
  auto out = execute(parse_lf(lf_text), t);
  EXPECT_TRUE(out.ok()) << (out.error ? out.error->message : "");
  return out.node_values.at(path);
}

std::optional<ExecError> error_of(std::string_view lf_text, const Table& t, ExecConfig cfg = {}) {
  return execute(parse_lf(lf_text), t, cfg).error;
}

const Table& scores() {
  static const Table t = make_table({"player", "score", "date", "note"},
                                    {{"ann", "12", "1999-01-03", "withdrew"},
                                     {"bob", "7", "2001-05-05", "3 goals"},
                                     {"cid", "12", "1998-07-01", ""},
                                     {"dee", "30", "2003-02-02", "ok"}});
  return t;
}

}  // namespace

TEST(Exec, Eagles) {
  auto out = execute(parse_lf(kEaglesLf), eagles_table());
  ASSERT_TRUE(out.ok());
  EXPECT_TRUE(*out.root_truth);
  EXPECT_FALSE(out.error);
  EXPECT_EQ(out.node_values.at(Path{0}), TypedValue::num(52500));
  EXPECT_EQ(out.node_values.at(Path{0, 0}), TypedValue::view({0, 2, 3, 4}));
  EXPECT_EQ(out.node_values.at(Path{0, 0, 0}), TypedValue::view({0, 1, 2, 3, 4}));
  EXPECT_EQ(out.node_values.at(Path{}), TypedValue::boolean(true));
}

TEST(Exec, FilterSubstringMatch) {
  EXPECT_EQ(value_of("only { filter_str_eq { all_rows ; result ; w } }", {0}), TypedValue::view({0, 2, 3, 4}));
  EXPECT_EQ(value_of("only { filter_str_eq { all_rows ; opponent ; NEW YORK } }", {0}), TypedValue::view({0, 3}));
  EXPECT_EQ(value_of("only { filter_str_not_eq { all_rows ; result ; w } }", {0}), TypedValue::view({1}));
}

TEST(Exec, NumericFilters) {
  EXPECT_EQ(value_of("only { filter_greater { all_rows ; attendance ; 54000 } }", {0}), TypedValue::view({0, 4}));
  EXPECT_EQ(value_of("only { filter_greater_eq { all_rows ; attendance ; 54,000 } }", {0}),
            TypedValue::view({0, 2, 4}));
  EXPECT_EQ(value_of("only { filter_less { all_rows ; attendance ; 39700 } }", {0}), TypedValue::view({3}));
  EXPECT_EQ(value_of("only { filter_less_eq { all_rows ; attendance ; 39700 } }", {0}), TypedValue::view({1, 3}));
  EXPECT_EQ(value_of("only { filter_eq { all_rows ; attendance ; 27500 } }", {0}), TypedValue::view({3}));
  EXPECT_EQ(value_of("only { filter_not_eq { all_rows ; attendance ; 27500 } }", {0}),
            TypedValue::view({0, 1, 2, 4}));
  // numeric context on "w 23-17" reads 23
  EXPECT_EQ(value_of("only { filter_greater { all_rows ; result ; 20 } }", {0}), TypedValue::view({0, 2}));
}

TEST(Exec, Aggregates) {
  const auto& t = eagles_table();
  EXPECT_EQ(value_of("eq { count { all_rows } ; 5 }", {0}), TypedValue::num(5));
  EXPECT_EQ(value_of("eq { sum { all_rows ; attendance } ; 1 }", {0}, t), TypedValue::num(249700));
  EXPECT_EQ(value_of("eq { max { all_rows ; attendance } ; 1 }", {0}), TypedValue::num(67000));
  EXPECT_EQ(value_of("eq { min { all_rows ; attendance } ; 1 }", {0}), TypedValue::num(27500));
  EXPECT_EQ(value_of("eq { nth_max { all_rows ; attendance ; 2 } ; 1 }", {0}), TypedValue::num(61500));
  EXPECT_EQ(value_of("eq { nth_min { all_rows ; attendance ; 2 } ; 1 }", {0}), TypedValue::num(39700));
  EXPECT_EQ(value_of("eq { diff { 5 ; 8 } ; 1 }", {0}), TypedValue::num(-3));
  EXPECT_EQ(value_of("eq { sum { filter_str_eq { all_rows ; result ; x } ; attendance } ; 0 }", {0}),
            TypedValue::num(0));
}

TEST(Exec, RowsAndHops) {
  EXPECT_EQ(value_of("str_eq { str_hop { argmax { all_rows ; attendance } ; opponent } ; x }", {0, 0}),
            TypedValue::row(0));
  EXPECT_EQ(value_of("str_eq { str_hop { argmin { all_rows ; attendance } ; opponent } ; x }", {0}),
            TypedValue::text("new york giants"));
  EXPECT_EQ(value_of("str_eq { str_hop { nth_argmax { all_rows ; attendance ; 3 } ; opponent } ; x }", {0}),
            TypedValue::text("new orleans saints"));
  EXPECT_EQ(value_of("eq { num_hop { nth_argmin { all_rows ; attendance ; 2 } ; attendance } ; 1 }", {0}),
            TypedValue::num(39700));
  EXPECT_EQ(value_of("str_eq { str_hop_first { filter_str_eq { all_rows ; result ; l } ; opponent } ; x }", {0}),
            TypedValue::text("atlanta falcons"));
  EXPECT_EQ(value_of("eq { num_hop_first { all_rows ; attendance } ; 1 }", {0}), TypedValue::num(67000));
}

TEST(Exec, TiesBreakToLowestRow) {
  EXPECT_EQ(value_of("eq { num_hop { argmax { all_rows ; score } ; score } ; 1 }", {0, 0}, scores()),
            TypedValue::row(3));
  EXPECT_EQ(value_of("eq { num_hop { nth_argmax { all_rows ; score ; 2 } ; score } ; 1 }", {0, 0}, scores()),
            TypedValue::row(0));
  EXPECT_EQ(value_of("eq { num_hop { nth_argmax { all_rows ; score ; 3 } ; score } ; 1 }", {0, 0}, scores()),
            TypedValue::row(2));
  EXPECT_EQ(value_of("eq { num_hop { nth_argmin { all_rows ; score ; 2 } ; score } ; 1 }", {0, 0}, scores()),
            TypedValue::row(0));
}

TEST(Exec, Dates) {
  EXPECT_EQ(value_of("only { filter_greater { all_rows ; date ; 2000-01-01 } }", {0}, scores()),
            TypedValue::view({1, 3}));
  EXPECT_EQ(value_of("eq { num_hop { argmin { all_rows ; date } ; score } ; 1 }", {0, 0}, scores()),
            TypedValue::row(2));
  EXPECT_EQ(value_of("eq { max { all_rows ; date } ; 2003-02-02 }", {0}, scores()), TypedValue::date({2003, 2, 2}));
  // Num vs Date is a type error
  auto e = error_of("eq { max { all_rows ; date } ; 5 }", scores());
  ASSERT_TRUE(e);
  EXPECT_EQ(e->kind, ExecError::Kind::TypeError);
  EXPECT_EQ(e->path, Path{});
}

TEST(Exec, Comparisons) {
  const auto& t = eagles_table();
  auto truth = [&](std::string_view s) {
    auto out = execute(parse_lf(s), t);
    EXPECT_TRUE(out.ok()) << s;
    return out.ok() && *out.root_truth;
  };
  EXPECT_FALSE(truth("greater { 2 ; 2 }"));
  EXPECT_FALSE(truth("less { 2 ; 2 }"));
  EXPECT_TRUE(truth("eq { 2 ; 2.0 }"));
  EXPECT_TRUE(truth("not_eq { 2 ; 3 }"));
  EXPECT_TRUE(truth("round_eq { 100 ; 109 }"));
  EXPECT_TRUE(truth("round_eq { 100 ; 110 }"));
  EXPECT_FALSE(truth("round_eq { 100 ; 112 }"));
  EXPECT_TRUE(truth("round_eq { 0 ; 0.1 }"));
  EXPECT_TRUE(truth("str_eq { str_hop_first { all_rows ; opponent } ; new york }"));
  EXPECT_TRUE(truth("str_eq { giants ; str_hop_first { all_rows ; opponent } }"));
  EXPECT_FALSE(truth("str_eq { str_hop_first { all_rows ; opponent } ; falcons }"));
  EXPECT_TRUE(truth("not_str_eq { str_hop_first { all_rows ; opponent } ; falcons }"));
  EXPECT_TRUE(truth("str_eq { count { all_rows } ; 5 }"));
  EXPECT_TRUE(truth("and { only { filter_str_eq { all_rows ; result ; l } } ; greater { 3 ; 2 } }"));
  EXPECT_FALSE(truth("only { all_rows }"));
  EXPECT_TRUE(truth("eq { 1,000 ; 1000 }"));
}

TEST(Exec, Quantifiers) {
  const auto& t = eagles_table();
  auto truth = [&](std::string_view s) { return *execute(parse_lf(s), t).root_truth; };
  EXPECT_TRUE(truth("all_greater { all_rows ; attendance ; 27000 }"));
  EXPECT_FALSE(truth("all_greater { all_rows ; attendance ; 27500 }"));
  EXPECT_TRUE(truth("all_greater_eq { all_rows ; attendance ; 27500 }"));
  EXPECT_TRUE(truth("most_str_eq { all_rows ; result ; w }"));
  EXPECT_FALSE(truth("most_str_eq { all_rows ; opponent ; new york }"));
  EXPECT_TRUE(truth("all_str_not_eq { all_rows ; opponent ; dallas }"));
  EXPECT_TRUE(truth("most_less { all_rows ; attendance ; 61500 }"));
  EXPECT_FALSE(truth("most_less { all_rows ; attendance ; 54000 }"));
  // exactly half is not most
  auto four = make_table({"x"}, {{"1"}, {"1"}, {"2"}, {"2"}});
  EXPECT_FALSE(*execute(parse_lf("most_eq { all_rows ; x ; 1 }"), four).root_truth);
  EXPECT_TRUE(*execute(parse_lf("all_less_eq { all_rows ; x ; 2 }"), four).root_truth);
}

TEST(Exec, ErrorKinds) {
  const auto& t = eagles_table();
  struct Case {
    const char* lf;
    ExecError::Kind kind;
    Path path;
  };
  std::vector<Case> cases{
      {"eq { avg { filter_str_eq { all_rows ; result ; x } ; attendance } ; 1 }", ExecError::Kind::EmptyView, {0}},
      {"eq { max { filter_str_eq { all_rows ; result ; x } ; attendance } ; 1 }", ExecError::Kind::EmptyView, {0}},
      {"eq { num_hop_first { filter_str_eq { all_rows ; result ; x } ; attendance } ; 1 }",
       ExecError::Kind::EmptyView, {0}},
      {"all_eq { filter_str_eq { all_rows ; result ; x } ; attendance ; 1 }", ExecError::Kind::EmptyView, {}},
      {"eq { avg { all_rows ; opponent } ; 1 }", ExecError::Kind::TypeError, {0}},
      {"eq { max { all_rows ; opponent } ; 1 }", ExecError::Kind::TypeError, {0}},
      {"eq { str_hop_first { all_rows ; opponent } ; 1 }", ExecError::Kind::TypeError, {0}},
      {"eq { num_hop_first { all_rows ; opponent } ; 1 }", ExecError::Kind::TypeError, {0}},
      {"only { filter_eq { all_rows ; attendance ; lots } }", ExecError::Kind::TypeError, {0}},
      {"only { filter_greater { all_rows ; opponent ; 3 } }", ExecError::Kind::TypeError, {0}},
      {"eq { nth_max { all_rows ; attendance ; 6 } ; 1 }", ExecError::Kind::IndexOutOfRange, {0, 2}},
      {"eq { nth_max { all_rows ; attendance ; 21 } ; 1 }", ExecError::Kind::InvalidLf, {0, 2}},
      {"eq { max { all_rows ; crowd } ; 1 }", ExecError::Kind::InvalidLf, {0, 1}},
  };
  for (const auto& c : cases) {
    auto e = error_of(c.lf, t);
    ASSERT_TRUE(e) << c.lf;
    EXPECT_EQ(e->kind, c.kind) << c.lf << ": " << e->message;
    EXPECT_EQ(e->path, c.path) << c.lf;
  }
}

TEST(Exec, NonNumericCellsAreTypeErrors) {
  // "withdrew" has no numeric reading, "" neither
  auto e = error_of("only { filter_less { all_rows ; note ; 5 } }", scores());
  ASSERT_TRUE(e);
  EXPECT_EQ(e->kind, ExecError::Kind::TypeError);
  auto ok = execute(parse_lf("only { filter_less { filter_str_eq { all_rows ; player ; bob } ; note ; 5 } }"), scores());
  ASSERT_TRUE(ok.ok());
  EXPECT_TRUE(*ok.root_truth);
}

TEST(Exec, EmptyViewPolicy) {
  ExecConfig cfg;
  cfg.empty_view_policy = EmptyViewPolicy::false_propagate;
  auto lf = parse_lf("eq { avg { filter_str_eq { all_rows ; result ; x } ; attendance } ; 1 }");
  auto out = execute(lf, eagles_table(), cfg);
  ASSERT_TRUE(out.ok());
  EXPECT_FALSE(*out.root_truth);
  // other errors are not masked
  auto te = execute(parse_lf("eq { avg { all_rows ; opponent } ; 1 }"), eagles_table(), cfg);
  EXPECT_FALSE(te.ok());
}

TEST(Exec, ConfigTolerance) {
  ExecConfig cfg;
  cfg.round_eq_tolerance = 0.2;
  auto lf = parse_lf("round_eq { 100 ; 118 }");
  EXPECT_FALSE(*execute(lf, eagles_table()).root_truth);
  EXPECT_TRUE(*execute(lf, eagles_table(), cfg).root_truth);
  cfg.round_eq_tolerance = 1.0;
  EXPECT_THROW(cfg.check(), Error);
  cfg.round_eq_tolerance = 0.0;
  EXPECT_THROW(cfg.check(), Error);
}

TEST(Fcr, Examples) {
  const auto& t = eagles_table();
  EXPECT_TRUE(fcr_accept(parse_lf(kEaglesLf), t));
  EXPECT_FALSE(fcr_accept(parse_lf("eq { avg { filter_str_eq { all_rows ; result ; w } ; attendance } ; 52501 }"), t));
  EXPECT_FALSE(fcr_accept(parse_lf("eq { avg { filter_str_eq { all_rows ; outcome ; w } ; attendance } ; 52500 }"), t));
  EXPECT_FALSE(fcr_accept(parse_lf("eq { avg { all_rows ; opponent } ; 1 }"), t));
}

// Filter monotonicity, count = rows, sum = avg * count, determinism.
TEST(ExecProperties, RandomTables) {
  std::mt19937 rng(17);
  const std::vector<std::string> cells{"1", "2", "3", "10", "-4", "2.5", "a", "b c", "w 3-1"};
  const std::vector<std::string> filters{"filter_eq",      "filter_not_eq", "filter_greater", "filter_greater_eq",
                                         "filter_less",    "filter_less_eq", "filter_str_eq", "filter_str_not_eq"};
  for (int it = 0; it < 300; ++it) {
    std::size_t rows = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
    Table t = make_table({"k", "v"}, {});
    for (std::size_t r = 0; r < rows; ++r)
      t.rows.push_back({cells[rng() % cells.size()], cells[rng() % 6]});
    const auto& f = filters[rng() % filters.size()];
    const auto& val = cells[rng() % cells.size()];
    auto lf = parse_lf("only { " + f + " { all_rows ; k ; " + val + " } }");
    auto a = execute(lf, t), b = execute(lf, t);
    EXPECT_EQ(a.node_values, b.node_values);
    EXPECT_EQ(a.root_truth, b.root_truth);
    if (a.ok()) {
      const auto& v = a.node_values.at(Path{0}).as_view();
      EXPECT_TRUE(std::is_sorted(v.begin(), v.end()));
      for (auto r : v) EXPECT_LT(r, rows);
    }
    auto cnt = execute(parse_lf("eq { count { all_rows } ; 1 }"), t).node_values.at(Path{0});
    EXPECT_EQ(cnt.as_num(), static_cast<double>(rows));
    auto sum = execute(parse_lf("eq { sum { all_rows ; v } ; 1 }"), t).node_values.at(Path{0}).as_num();
    auto avg = execute(parse_lf("eq { avg { all_rows ; v } ; 1 }"), t).node_values.at(Path{0}).as_num();
    EXPECT_NEAR(sum, avg * static_cast<double>(rows), 1e-9 * std::max(1.0, std::fabs(sum)));
  }
}

TEST(Exec, EvaluateSubtree) {
  auto lf = parse_lf(kEaglesLf);
  auto r = evaluate(lf.root().child(0), eagles_table());
  ASSERT_TRUE(r.value);
  EXPECT_EQ(*r.value, TypedValue::num(52500));
}
