#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tlt/lf.hpp"
#include "tlt/table.hpp"
#include "tlt/validate.hpp"

namespace tlt {

enum class EmptyViewPolicy { error, false_propagate };

// fixed: the disambiguated grammar, rule names decide numeric vs string.
// legacy: source-grammar behaviour, twins decide by operand typing at run time
// and hop-family rules read the first row of a View.
enum class Semantics { fixed, legacy };

struct ExecConfig {
  double round_eq_tolerance = 0.10;
  double most_threshold = 0.5;  // most_* holds when strictly more than this fraction of rows match
  EmptyViewPolicy empty_view_policy = EmptyViewPolicy::error;
  std::uint32_t max_index = kDefaultMaxIndex;
  Semantics semantics = Semantics::fixed;

  void check() const {
    if (!(round_eq_tolerance > 0.0 && round_eq_tolerance < 1.0))
      throw Error(Errc::InvalidConfig, "round_eq tolerance must lie in (0, 1)");
    if (!(most_threshold >= 0.5 && most_threshold < 1.0))
      throw Error(Errc::InvalidConfig, "most threshold must lie in [0.5, 1)");
    if (max_index < 1) throw Error(Errc::InvalidConfig, "max index must be positive");
  }
};

struct ExecError {
  enum class Kind { EmptyView, TypeError, IndexOutOfRange, InvalidLf };
  Kind kind;
  Path path;
  std::string message;
};

constexpr std::string_view to_string(ExecError::Kind k) {
  switch (k) {
    case ExecError::Kind::EmptyView: return "EmptyView";
    case ExecError::Kind::TypeError: return "TypeError";
    case ExecError::Kind::IndexOutOfRange: return "IndexOutOfRange";
    case ExecError::Kind::InvalidLf: return "InvalidLf";
  }
  return "?";
}

// root_truth is set iff error is not.
struct ExecOutcome {
  std::optional<bool> root_truth;
  std::map<Path, TypedValue> node_values;
  std::optional<ExecError> error;

  bool ok() const { return root_truth.has_value(); }
};

struct EvalResult {
  std::optional<TypedValue> value;
  std::optional<ExecError> error;
};

namespace detail {

enum class Cmp { eq, ne, gt, ge, lt, le, round_eq };

// Operator encoded in a comparison rule name, e.g. filter_str_not_eq -> ne.
inline std::optional<Cmp> comparator_of(std::string_view name) {
  for (std::string_view prefix : {"filter_", "all_", "most_"})
    if (name.substr(0, prefix.size()) == prefix) {
      name.remove_prefix(prefix.size());
      break;
    }
  if (name.substr(0, 4) == "str_") name.remove_prefix(4);
  if (name == "eq") return Cmp::eq;
  if (name == "not_eq" || name == "not_str_eq") return Cmp::ne;
  if (name == "greater") return Cmp::gt;
  if (name == "greater_eq") return Cmp::ge;
  if (name == "less") return Cmp::lt;
  if (name == "less_eq") return Cmp::le;
  if (name == "round_eq") return Cmp::round_eq;
  return std::nullopt;
}

struct ExecFailure {
  ExecError error;
};

using Comparable = std::variant<double, Date>;

class Evaluator {
 public:
  Evaluator(const Table& table, const ExecConfig& cfg, std::map<Path, TypedValue>* trace)
      : table_(table), cfg_(cfg), trace_(trace) {}

  TypedValue eval(const LfNode& n, const Path& path) {
    TypedValue v = n.is_rule() ? eval_rule(n, path) : eval_leaf(n);
    if (trace_) trace_->emplace(path, v);
    return v;
  }

 private:
  [[noreturn]] static void fail(ExecError::Kind k, const Path& p, std::string msg) {
    throw ExecFailure{{k, p, std::move(msg)}};
  }

  static TypedValue eval_leaf(const LfNode& n) {
    switch (n.type()) {
      case LfNode::Type::Column:
      case LfNode::Type::Value: return TypedValue::text(n.text());
      case LfNode::Type::Index: return TypedValue::num(n.ordinal());
      default: return TypedValue::text(std::string(placeholder_token(n.kind())));
    }
  }

  std::size_t column(const LfNode& c, const Path& p) const {
    auto idx = table_.column_index(c.text());
    if (!idx) fail(ExecError::Kind::InvalidLf, p, "no column '" + c.text() + "'");
    return *idx;
  }

  Comparable comparable(const TypedValue& v, const Path& p) const {
    if (v.is_num()) return v.as_num();
    if (v.is_date()) return v.as_date();
    if (v.is_text()) {
      auto c = coerce_cell(v.as_text());
      if (c.is_num()) return c.as_num();
      if (c.is_date()) return c.as_date();
      if (auto x = numeric_context(v.as_text())) return *x;
      fail(ExecError::Kind::TypeError, p, "'" + v.as_text() + "' is not numeric");
    }
    fail(ExecError::Kind::TypeError, p, std::string("cannot compare a ") + std::string(v.type_name()));
  }

  Comparable cell_comparable(std::size_t row, std::size_t col, const Path& p) const {
    return comparable(TypedValue::text(table_.cell(row, col)), p);
  }

  bool numeric_cmp(const Comparable& a, const Comparable& b, Cmp op, const Path& p) const {
    if (a.index() != b.index()) fail(ExecError::Kind::TypeError, p, "number compared with a date");
    if (op == Cmp::round_eq) {
      if (const auto* x = std::get_if<double>(&a)) {
        double y = std::get<double>(b);
        return std::fabs(*x - y) <= cfg_.round_eq_tolerance * std::max({std::fabs(*x), std::fabs(y), 1.0});
      }
      return a == b;
    }
    switch (op) {
      case Cmp::eq: return a == b;
      case Cmp::ne: return a != b;
      case Cmp::gt: return a > b;
      case Cmp::ge: return a >= b;
      case Cmp::lt: return a < b;
      case Cmp::le: return a <= b;
      default: return false;
    }
  }

  static bool string_cmp_contains(const std::string& cell, const std::string& value, Cmp op) {
    bool hit = text::icontains(cell, value);
    return op == Cmp::ne ? !hit : hit;
  }

  // In legacy mode twin rules pick numeric when the literal (or, lacking one,
  // every operand) is numeric- or date-like.
  bool use_string(const GrammarRule& r, const std::vector<TypedValue>& operands) const {
    if (cfg_.semantics == Semantics::fixed || r.twin.empty()) return r.semantics == ValueSemantics::string;
    for (const auto& v : operands) {
      if (v.is_num() || v.is_date()) continue;
      if (!v.is_text()) return true;
      auto c = coerce_cell(v.as_text());
      if (!c.is_num() && !c.is_date()) return true;
    }
    return false;
  }

  std::vector<std::size_t> view_arg(const LfNode& n, std::size_t i, const Path& path) {
    auto v = eval(n.child(i), child_path(path, i));
    if (!v.is_view()) fail(ExecError::Kind::InvalidLf, child_path(path, i), "expected a view");
    return v.as_view();
  }

  void require_rows(const std::vector<std::size_t>& rows, const Path& p, const std::string& rule) const {
    if (rows.empty()) fail(ExecError::Kind::EmptyView, p, rule + " over an empty view");
  }

  // Rows of `view` ordered by the column value, descending when `desc`. Ties keep table order.
  std::vector<std::pair<Comparable, std::size_t>> ranked(const std::vector<std::size_t>& view, std::size_t col,
                                                         bool desc, const Path& p) const {
    std::vector<std::pair<Comparable, std::size_t>> items;
    items.reserve(view.size());
    for (auto r : view) items.emplace_back(cell_comparable(r, col, p), r);
    for (std::size_t i = 1; i < items.size(); ++i)
      if (items[i].first.index() != items[0].first.index())
        fail(ExecError::Kind::TypeError, p, "column mixes numbers and dates");
    std::stable_sort(items.begin(), items.end(), [desc](const auto& a, const auto& b) {
      return desc ? a.first > b.first : a.first < b.first;
    });
    return items;
  }

  static TypedValue from_comparable(const Comparable& c) {
    if (const auto* x = std::get_if<double>(&c)) return TypedValue::num(*x);
    return TypedValue::date(std::get<Date>(c));
  }

  std::size_t ordinal_arg(const LfNode& n, std::size_t i, const Path& path, std::size_t available) {
    auto v = eval(n.child(i), child_path(path, i));
    auto k = static_cast<std::size_t>(v.as_num());
    if (k < 1 || k > available)
      fail(ExecError::Kind::IndexOutOfRange, child_path(path, i),
           "ordinal " + std::to_string(k) + " with " + std::to_string(available) + " rows");
    return k;
  }

  // Per-row predicate shared by filter_*, all_* and most_*.
  std::vector<bool> row_matches(const GrammarRule& r, const std::vector<std::size_t>& view, std::size_t col,
                                const TypedValue& value, const Path& path) const {
    auto op = *comparator_of(r.name);
    std::vector<bool> hits;
    hits.reserve(view.size());
    bool as_string = use_string(r, {value});
    std::optional<Comparable> rhs;
    if (!as_string) rhs = comparable(value, path);
    for (auto row : view) {
      if (as_string) {
        hits.push_back(string_cmp_contains(table_.cell(row, col), value.as_text(), op));
        continue;
      }
      hits.push_back(numeric_cmp(cell_comparable(row, col, path), *rhs, op, path));
    }
    return hits;
  }

  TypedValue eval_rule(const LfNode& n, const Path& path) {
    const auto& r = n.rule();
    const std::string& name = r.name;
    auto cpath = [&](std::size_t i) { return child_path(path, i); };

    switch (r.result) {
      case NodeKind::View: {
        if (name == "all_rows") return TypedValue::view(table_.all_positions());
        auto view = view_arg(n, 0, path);
        auto col = column(n.child(1), cpath(1));
        eval(n.child(1), cpath(1));
        if (name == "filter_all") return TypedValue::view(std::move(view));
        auto value = eval(n.child(2), cpath(2));
        auto hits = row_matches(r, view, col, value, path);
        std::vector<std::size_t> kept;
        for (std::size_t i = 0; i < view.size(); ++i)
          if (hits[i]) kept.push_back(view[i]);
        return TypedValue::view(std::move(kept));
      }

      case NodeKind::N: {
        if (name == "count") return TypedValue::num(static_cast<double>(view_arg(n, 0, path).size()));
        if (name == "diff") {
          auto a = comparable(eval(n.child(0), cpath(0)), cpath(0));
          auto b = comparable(eval(n.child(1), cpath(1)), cpath(1));
          if (!std::holds_alternative<double>(a) || !std::holds_alternative<double>(b))
            fail(ExecError::Kind::TypeError, path, "diff needs numbers");
          return TypedValue::num(std::get<double>(a) - std::get<double>(b));
        }
        auto view = view_arg(n, 0, path);
        auto col = column(n.child(1), cpath(1));
        eval(n.child(1), cpath(1));
        if (name == "sum" || name == "avg") {
          if (name == "avg") require_rows(view, path, name);
          if (view.empty()) return TypedValue::num(0);
          double total = 0;
          for (auto row : view) {
            auto c = cell_comparable(row, col, path);
            if (!std::holds_alternative<double>(c)) fail(ExecError::Kind::TypeError, path, name + " over dates");
            total += std::get<double>(c);
          }
          return TypedValue::num(name == "sum" ? total : total / static_cast<double>(view.size()));
        }
        require_rows(view, path, name);
        bool desc = name == "max" || name == "nth_max";
        auto items = ranked(view, col, desc, path);
        std::size_t k = 1;
        if (name == "nth_max" || name == "nth_min") k = ordinal_arg(n, 2, path, items.size());
        return from_comparable(items[k - 1].first);
      }

      case NodeKind::Row: {
        auto view = view_arg(n, 0, path);
        auto col = column(n.child(1), cpath(1));
        eval(n.child(1), cpath(1));
        require_rows(view, path, name);
        bool desc = name == "argmax" || name == "nth_argmax";
        auto items = ranked(view, col, desc, path);
        std::size_t k = 1;
        if (name == "nth_argmax" || name == "nth_argmin") k = ordinal_arg(n, 2, path, items.size());
        return TypedValue::row(items[k - 1].second);
      }

      case NodeKind::Obj: {
        auto source = eval(n.child(0), cpath(0));
        auto col = column(n.child(1), cpath(1));
        eval(n.child(1), cpath(1));
        std::size_t row = 0;
        if (source.is_row()) {
          row = source.as_row();
        } else if (source.is_view()) {
          require_rows(source.as_view(), path, name);
          row = source.as_view().front();
        } else {
          fail(ExecError::Kind::InvalidLf, cpath(0), "hop needs a row or view");
        }
        if (r.semantics == ValueSemantics::string) return TypedValue::text(table_.cell(row, col));
        return from_comparable(cell_comparable(row, col, path));
      }

      case NodeKind::Stat: return TypedValue::boolean(eval_stat(n, path));

      default: fail(ExecError::Kind::InvalidLf, path, "leaf kind used as a rule");
    }
  }

  bool eval_stat(const LfNode& n, const Path& path) {
    const auto& r = n.rule();
    const std::string& name = r.name;
    auto cpath = [&](std::size_t i) { return child_path(path, i); };

    if (name == "and") {
      bool a = eval(n.child(0), cpath(0)).as_bool();
      bool b = eval(n.child(1), cpath(1)).as_bool();
      return a && b;
    }
    if (name == "only") return view_arg(n, 0, path).size() == 1;

    auto op = comparator_of(name);
    if (!op) fail(ExecError::Kind::InvalidLf, path, "no semantics for " + name);

    if (r.args.size() == 2) {
      auto a = eval(n.child(0), cpath(0));
      auto b = eval(n.child(1), cpath(1));
      if (use_string(r, {a, b})) {
        // Either side may carry the extra words ("new york" vs "new york giants").
        auto x = text::fold(to_display(a));
        auto y = text::fold(to_display(b));
        bool hit = (x.empty() || y.empty()) ? x == y
                                            : x.find(y) != std::string::npos || y.find(x) != std::string::npos;
        return *op == Cmp::ne ? !hit : hit;
      }
      return numeric_cmp(comparable(a, cpath(0)), comparable(b, cpath(1)), *op, path);
    }

    // all_* / most_* over (View, C, V)
    auto view = view_arg(n, 0, path);
    auto col = column(n.child(1), cpath(1));
    eval(n.child(1), cpath(1));
    auto value = eval(n.child(2), cpath(2));
    require_rows(view, path, name);
    auto hits = row_matches(r, view, col, value, path);
    auto matched = static_cast<double>(std::count(hits.begin(), hits.end(), true));
    if (name.rfind("all_", 0) == 0) return matched == static_cast<double>(view.size());
    return matched > cfg_.most_threshold * static_cast<double>(view.size());
  }

  const Table& table_;
  const ExecConfig& cfg_;
  std::map<Path, TypedValue>* trace_;
};

inline std::optional<ExecError> first_violation(const LfNode& root, const Table& table, const ExecConfig& cfg) {
  auto violations = validate(root, table, cfg.max_index);
  if (violations.empty()) return std::nullopt;
  const auto& v = violations.front();
  return ExecError{ExecError::Kind::InvalidLf, v.path, std::string(to_string(v.kind)) + ": " + v.message};
}

}  // namespace detail

// Evaluates a subtree on its own. Paths in errors are relative to `node`.
inline EvalResult evaluate(const LfNode& node, const Table& table, const ExecConfig& cfg = {}) {
  try {
    detail::Evaluator ev(table, cfg, nullptr);
    return {ev.eval(node, {}), std::nullopt};
  } catch (const detail::ExecFailure& f) {
    return {std::nullopt, f.error};
  }
}

// Bottom-up evaluation of the whole LF, recording the value of every node.
inline ExecOutcome execute(const LogicalForm& lf, const Table& table, const ExecConfig& cfg = {}) {
  ExecOutcome out;
  if (auto bad = detail::first_violation(lf.root(), table, cfg)) {
    out.error = std::move(bad);
    return out;
  }
  try {
    detail::Evaluator ev(table, cfg, &out.node_values);
    out.root_truth = ev.eval(lf.root(), {}).as_bool();
  } catch (const detail::ExecFailure& f) {
    if (f.error.kind == ExecError::Kind::EmptyView && cfg.empty_view_policy == EmptyViewPolicy::false_propagate)
      out.root_truth = false;
    else
      out.error = f.error;
  }
  return out;
}

// False Candidate Rejection: accept only LFs that are valid and execute to true.
inline bool fcr_accept(const LogicalForm& lf, const Table& table, const ExecConfig& cfg = {}) {
  if (detail::first_violation(lf.root(), table, cfg)) return false;
  try {
    detail::Evaluator ev(table, cfg, nullptr);
    return ev.eval(lf.root(), {}).as_bool();
  } catch (const detail::ExecFailure&) {
    return false;
  }
}

}  // namespace tlt
