#pragma once

#include <cmath>
#include <compare>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "tlt/common.hpp"

namespace tlt {

struct Date {
  int year = 0;
  int month = 1;
  int day = 1;
  auto operator<=>(const Date&) const = default;
};

struct RowRef {
  std::size_t position = 0;
  bool operator==(const RowRef&) const = default;
};

struct ViewRef {
  std::vector<std::size_t> rows;  // strictly increasing table positions
  bool operator==(const ViewRef&) const = default;
};

// Runtime value of an LF node.
class TypedValue {
 public:
  using Storage = std::variant<bool, double, std::string, Date, RowRef, ViewRef>;

  TypedValue() = default;
  static TypedValue boolean(bool b) { return TypedValue(Storage(std::in_place_type<bool>, b)); }
  static TypedValue num(double x) { return TypedValue(Storage(std::in_place_type<double>, x)); }
  static TypedValue text(std::string s) { return TypedValue(Storage(std::in_place_type<std::string>, std::move(s))); }
  static TypedValue date(Date d) { return TypedValue(Storage(d)); }
  static TypedValue row(std::size_t pos) { return TypedValue(Storage(RowRef{pos})); }
  static TypedValue view(std::vector<std::size_t> rows) { return TypedValue(Storage(ViewRef{std::move(rows)})); }

  bool is_bool() const { return std::holds_alternative<bool>(v_); }
  bool is_num() const { return std::holds_alternative<double>(v_); }
  bool is_text() const { return std::holds_alternative<std::string>(v_); }
  bool is_date() const { return std::holds_alternative<Date>(v_); }
  bool is_row() const { return std::holds_alternative<RowRef>(v_); }
  bool is_view() const { return std::holds_alternative<ViewRef>(v_); }

  bool as_bool() const { return std::get<bool>(v_); }
  double as_num() const { return std::get<double>(v_); }
  const std::string& as_text() const { return std::get<std::string>(v_); }
  const Date& as_date() const { return std::get<Date>(v_); }
  std::size_t as_row() const { return std::get<RowRef>(v_).position; }
  const std::vector<std::size_t>& as_view() const { return std::get<ViewRef>(v_).rows; }

  const Storage& storage() const { return v_; }

  std::string_view type_name() const {
    constexpr std::string_view names[] = {"bool", "num", "text", "date", "row", "view"};
    return names[v_.index()];
  }

  friend bool operator==(const TypedValue&, const TypedValue&) = default;

 private:
  explicit TypedValue(Storage v) : v_(std::move(v)) {}
  Storage v_ = false;
};

inline std::string format_number(double x) {
  char buf[64];
  if (std::isfinite(x) && x == std::floor(x) && std::fabs(x) < 1e15)
    std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(x));
  else
    std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

inline std::string format_date(const Date& d) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", d.year, d.month, d.day);
  return buf;
}

// Plain-text rendering used by string-semantics rules and diagnostics.
inline std::string to_display(const TypedValue& v) {
  struct Visitor {
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(double x) const { return format_number(x); }
    std::string operator()(const std::string& s) const { return s; }
    std::string operator()(const Date& d) const { return format_date(d); }
    std::string operator()(const RowRef& r) const { return "row " + std::to_string(r.position); }
    std::string operator()(const ViewRef& v) const {
      std::string out = "rows [";
      for (std::size_t i = 0; i < v.rows.size(); ++i) out += (i ? "," : "") + std::to_string(v.rows[i]);
      return out + "]";
    }
  };
  return std::visit(Visitor{}, v.storage());
}

// ---------------------------------------------------------------------------
// Cell coercion

namespace detail {

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Digits with optional comma thousands groups and an optional decimal part,
// starting at `i`. Returns the end offset and appends the digits to `out`.
inline std::size_t scan_number_body(std::string_view s, std::size_t i, std::string& out) {
  std::size_t start = i;
  std::size_t lead = 0;
  while (i < s.size() && is_digit(s[i])) out += s[i++], ++lead;
  if (lead > 0 && lead <= 3) {
    // comma groups only count when every group has exactly three digits
    while (i + 3 < s.size() && s[i] == ',' && is_digit(s[i + 1]) && is_digit(s[i + 2]) &&
           is_digit(s[i + 3]) && (i + 4 >= s.size() || !is_digit(s[i + 4]))) {
      out.append(s.substr(i + 1, 3));
      i += 4;
    }
  }
  if (i < s.size() && s[i] == '.' && i + 1 < s.size() && is_digit(s[i + 1])) {
    out += s[i++];
    while (i < s.size() && is_digit(s[i])) out += s[i++];
  }
  if (out.empty() || out == ".") return start;
  return i;
}

inline int month_from_name(std::string_view name) {
  static constexpr std::string_view months[] = {"january", "february", "march",     "april",
                                                 "may",     "june",     "july",      "august",
                                                 "september", "october", "november", "december"};
  auto lower = text::to_lower(name);
  for (int m = 0; m < 12; ++m) {
    if (lower == months[m]) return m + 1;
    if (lower.size() == 3 && months[m].substr(0, 3) == lower) return m + 1;
  }
  return 0;
}

inline bool valid_date(int y, int m, int d) {
  static constexpr int days[] = {31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m < 1 || m > 12 || d < 1 || d > days[m - 1]) return false;
  if (m == 2 && d == 29) return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
  return true;
}

inline std::optional<int> parse_int(std::string_view s, std::size_t min_len, std::size_t max_len) {
  if (s.size() < min_len || s.size() > max_len) return std::nullopt;
  int v = 0;
  for (char c : s) {
    if (!is_digit(c)) return std::nullopt;
    v = v * 10 + (c - '0');
  }
  return v;
}

inline std::vector<std::string_view> split_words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (text::is_space(s[i]) || s[i] == ',')) ++i;
    std::size_t j = i;
    while (j < s.size() && !text::is_space(s[j]) && s[j] != ',') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace detail

// Whole-cell numeric parse: sign, digits, thousands separators, decimal part,
// optional trailing percent sign.
inline std::optional<double> parse_number(std::string_view cell) {
  auto s = text::normalize_ws(cell);
  std::size_t i = 0;
  bool neg = false;
  if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
  std::string digits;
  std::size_t end = detail::scan_number_body(s, i, digits);
  if (end == i) return std::nullopt;
  if (end < s.size() && s[end] == ' ') ++end;
  if (end < s.size() && s[end] == '%') ++end;
  if (end != s.size()) return std::nullopt;
  double v = std::strtod(digits.c_str(), nullptr);
  return neg ? -v : v;
}

// Recognized forms: YYYY, YYYY-MM-DD, "Month DD, YYYY", "DD Month YYYY".
inline std::optional<Date> parse_date(std::string_view cell) {
  auto s = text::normalize_ws(cell);
  if (auto y = detail::parse_int(s, 4, 4)) return Date{*y, 1, 1};
  if (s.size() == 10 && s[4] == '-' && s[7] == '-') {
    auto y = detail::parse_int(std::string_view(s).substr(0, 4), 4, 4);
    auto m = detail::parse_int(std::string_view(s).substr(5, 2), 2, 2);
    auto d = detail::parse_int(std::string_view(s).substr(8, 2), 2, 2);
    if (y && m && d && detail::valid_date(*y, *m, *d)) return Date{*y, *m, *d};
    return std::nullopt;
  }
  auto words = detail::split_words(s);
  if (words.size() != 3) return std::nullopt;
  // "Month DD, YYYY" requires the comma to follow the day, if present at all.
  if (int m = detail::month_from_name(words[0])) {
    auto d = detail::parse_int(words[1], 1, 2);
    auto y = detail::parse_int(words[2], 4, 4);
    if (d && y && detail::valid_date(*y, m, *d)) return Date{*y, m, *d};
  }
  if (int m = detail::month_from_name(words[1])) {
    if (s.find(',') != std::string::npos) return std::nullopt;
    auto d = detail::parse_int(words[0], 1, 2);
    auto y = detail::parse_int(words[2], 4, 4);
    if (d && y && detail::valid_date(*y, m, *d)) return Date{*y, m, *d};
  }
  return std::nullopt;
}

// Total, deterministic cell typing: Num, then Date, otherwise Text. A bare
// four-digit year is numeric-like first and therefore stays a Num.
inline TypedValue coerce_cell(std::string_view cell) {
  if (auto n = parse_number(cell)) return TypedValue::num(*n);
  if (auto d = parse_date(cell)) return TypedValue::date(*d);
  return TypedValue::text(std::string(cell));
}

// Numeric-context extraction for cells that are not numeric as a whole: the
// first maximal digit group (with thousands separators and decimal part). A
// '-' directly before it counts as a sign only at a word start.
inline std::optional<double> numeric_context(std::string_view cell) {
  for (std::size_t i = 0; i < cell.size(); ++i) {
    if (!detail::is_digit(cell[i])) continue;
    std::string digits;
    std::size_t end = detail::scan_number_body(cell, i, digits);
    if (end == i) return std::nullopt;
    bool neg = i > 0 && cell[i - 1] == '-' && (i == 1 || text::is_space(cell[i - 2]));
    double v = std::strtod(digits.c_str(), nullptr);
    return neg ? -v : v;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

struct Table {
  std::string caption;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t row_count() const { return rows.size(); }
  std::size_t column_count() const { return columns.size(); }

  // Duplicate names resolve to the first occurrence.
  std::optional<std::size_t> column_index(std::string_view name) const {
    auto key = text::normalize_ws(name);
    for (std::size_t i = 0; i < columns.size(); ++i)
      if (text::normalize_ws(columns[i]) == key) return i;
    return std::nullopt;
  }

  const std::string& cell(std::size_t row, std::size_t col) const { return rows.at(row).at(col); }

  std::vector<std::size_t> all_positions() const {
    std::vector<std::size_t> v(rows.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
    return v;
  }

  // Throws MalformedRecord when a row width differs from the header.
  void check() const {
    for (std::size_t r = 0; r < rows.size(); ++r)
      if (rows[r].size() != columns.size())
        throw Error(Errc::MalformedRecord, "row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                                               " cells, header has " + std::to_string(columns.size()));
  }

  bool operator==(const Table&) const = default;
};

inline std::vector<std::pair<std::size_t, TypedValue>> column_values(const Table& table, std::string_view column,
                                                                     const std::vector<std::size_t>& view) {
  auto col = table.column_index(column);
  if (!col) throw Error(Errc::UnknownColumn, "'" + std::string(column) + "'");
  std::vector<std::pair<std::size_t, TypedValue>> out;
  out.reserve(view.size());
  for (auto r : view) out.emplace_back(r, coerce_cell(table.cell(r, *col)));
  return out;
}

}  // namespace tlt
