#pragma once

#include <array>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tlt/dataset.hpp"
#include "tlt/exec.hpp"
#include "tlt/legacy.hpp"
#include "tlt/lf.hpp"
#include "tlt/table.hpp"

namespace tlt {

// TAB: literal found in the table. INF: literal equals the result of a
// computation over the table. AUX: neither.
enum class CsCategory { TAB, INF, AUX };

constexpr std::string_view to_string(CsCategory c) {
  switch (c) {
    case CsCategory::TAB: return "TAB";
    case CsCategory::INF: return "INF";
    case CsCategory::AUX: return "AUX";
  }
  return "?";
}

inline std::optional<CsCategory> cs_category_from_string(std::string_view s) {
  auto f = text::fold(s);
  if (f == "tab") return CsCategory::TAB;
  if (f == "inf") return CsCategory::INF;
  if (f == "aux") return CsCategory::AUX;
  return std::nullopt;
}

struct CsValue {
  std::string text;
  CsCategory category = CsCategory::AUX;
  Path source_path;

  bool operator==(const CsValue&) const = default;
};

namespace detail {

// Case-insensitive containment in some cell, or exact numeric equality with a
// whole cell.
inline bool in_table(std::string_view literal, const Table& table) {
  auto needle = text::fold(literal);
  if (needle.empty()) return false;
  auto num = parse_number(literal);
  for (const auto& row : table.rows)
    for (const auto& cell : row) {
      if (text::fold(cell).find(needle) != std::string::npos) return true;
      if (num) {
        auto c = parse_number(cell);
        if (c && *c == *num) return true;
      }
    }
  return false;
}

inline bool literal_matches(std::string_view literal, const TypedValue& v, double tol) {
  auto lit = coerce_cell(literal);
  if (v.is_num()) {
    std::optional<double> x;
    if (lit.is_num()) x = lit.as_num();
    else if (!lit.is_date()) x = numeric_context(literal);
    if (!x) return false;
    double y = v.as_num();
    return std::fabs(*x - y) <= tol * std::max({std::fabs(*x), std::fabs(y), 1.0});
  }
  if (v.is_date()) return lit.is_date() && lit.as_date() == v.as_date();
  if (v.is_text()) return text::iequals(literal, v.as_text());
  return false;
}

}  // namespace detail

// Classifies every V leaf of the LF, in preorder. Errors from the INF probe do
// not propagate: the value falls through to AUX and a warning is recorded.
inline std::vector<CsValue> extract_cs(const LogicalForm& lf, const Table& table, const ExecConfig& cfg = {},
                                       std::vector<std::string>* warnings = nullptr) {
  std::vector<CsValue> out;
  const LfNode& root = lf.root();
  walk(root, [&](const LfNode& n, const Path& p) {
    if (n.type() != LfNode::Type::Value) return;
    CsValue cv{n.text(), CsCategory::AUX, p};
    if (detail::in_table(n.text(), table)) {
      cv.category = CsCategory::TAB;
      out.push_back(std::move(cv));
      return;
    }
    // Nearest enclosing Stat node and the child branch holding this leaf.
    for (std::size_t depth = p.size(); depth-- > 0;) {
      Path stat_path(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(depth));
      const LfNode* stat = root.at(stat_path);
      if (!stat || stat->kind() != NodeKind::Stat) continue;
      for (std::size_t i = 0; i < stat->children().size(); ++i) {
        if (i == p[depth]) continue;
        const LfNode& sib = stat->child(i);
        if (!sib.is_rule() || (sib.kind() != NodeKind::N && sib.kind() != NodeKind::Obj)) continue;
        auto res = evaluate(sib, table, cfg);
        if (res.error) {
          if (warnings)
            warnings->push_back("probe for '" + n.text() + "' at " + path_string(p) + " failed: " +
                                std::string(to_string(res.error->kind)) + ": " + res.error->message);
          continue;
        }
        if (detail::literal_matches(n.text(), *res.value, cfg.round_eq_tolerance)) {
          cv.category = CsCategory::INF;
          break;
        }
      }
      break;
    }
    out.push_back(std::move(cv));
  });
  return out;
}

struct CsDistribution {
  // Fractions over every V occurrence.
  double tab = 0, inf = 0, aux = 0;
  // Fractions over distinct (record, value) pairs.
  double unique_tab = 0, unique_inf = 0, unique_aux = 0;
  std::size_t values = 0;
  std::size_t unique_values = 0;
  std::size_t records = 0;
  std::size_t records_skipped = 0;  // did not convert or parse
  bool empty = true;                // no values were counted; fractions are 0
};

// Records hold source-grammar LFs; each is converted before classification.
inline CsDistribution cs_distribution(const std::vector<DatasetRecord>& records, const ExecConfig& cfg = {},
                                      std::vector<std::string>* warnings = nullptr) {
  CsDistribution d;
  std::array<std::size_t, 3> occ{}, uniq{};
  for (const auto& rec : records) {
    ++d.records;
    std::vector<CsValue> values;
    try {
      auto conv = convert_legacy(rec.logic_str, rec.table);
      values = extract_cs(conv.lf, rec.table, cfg, warnings);
    } catch (const Error& e) {
      ++d.records_skipped;
      if (warnings) warnings->push_back(rec.id() + ": " + e.what());
      continue;
    }
    std::set<std::string> seen;
    for (const auto& v : values) {
      ++occ[static_cast<std::size_t>(v.category)];
      if (seen.insert(text::fold(v.text)).second) ++uniq[static_cast<std::size_t>(v.category)];
    }
  }
  d.values = occ[0] + occ[1] + occ[2];
  d.unique_values = uniq[0] + uniq[1] + uniq[2];
  d.empty = d.values == 0;
  if (!d.empty) {
    auto n = static_cast<double>(d.values);
    d.tab = static_cast<double>(occ[0]) / n;
    d.inf = static_cast<double>(occ[1]) / n;
    d.aux = static_cast<double>(occ[2]) / n;
    auto u = static_cast<double>(d.unique_values);
    d.unique_tab = static_cast<double>(uniq[0]) / u;
    d.unique_inf = static_cast<double>(uniq[1]) / u;
    d.unique_aux = static_cast<double>(uniq[2]) / u;
  }
  return d;
}

}  // namespace tlt
