#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tlt/dataset.hpp"
#include "tlt/exec.hpp"
#include "tlt/lf.hpp"
#include "tlt/table.hpp"

namespace tlt {

struct Rewrite {
  enum class Reason { string_variant, hop_first };
  Path path;
  std::string old_rule;
  std::string new_rule;
  Reason reason;
};

constexpr std::string_view to_string(Rewrite::Reason r) {
  return r == Rewrite::Reason::hop_first ? "hop_first" : "string_variant";
}

struct ConversionWarning {
  Errc code;
  Path path;
  std::string message;
};

struct ConversionReport {
  std::vector<Rewrite> rewrites;
  std::vector<ConversionWarning> warnings;

  bool unchanged() const { return rewrites.empty(); }
  bool has_hop_first() const {
    for (const auto& r : rewrites)
      if (r.reason == Rewrite::Reason::hop_first) return true;
    return false;
  }
};

struct Conversion {
  LogicalForm lf;
  ConversionReport report;
};

namespace detail {

class LegacyConverter {
 public:
  explicit LegacyConverter(const Table& table) : table_(table) {}

  NodePtr convert(const NodePtr& n, const Path& path) {
    if (!n->is_rule()) return n;
    std::vector<NodePtr> kids;
    kids.reserve(n->children().size());
    for (std::size_t i = 0; i < n->children().size(); ++i) kids.push_back(convert(n->children()[i], child_path(path, i)));

    const auto& written = n->rule();
    std::string name = written.name;
    if (is_hop_family(written)) {
      bool string_family = written.semantics == ValueSemantics::string;
      bool first = kids.at(0)->kind() == NodeKind::View;
      name = std::string(string_family ? "str_hop" : "num_hop") + (first ? "_first" : "");
      if (name != written.name) {
        auto reason = first != is_hop_first(written) ? Rewrite::Reason::hop_first : Rewrite::Reason::string_variant;
        report.rewrites.push_back({path, written.name, name, reason});
      }
    } else if (!written.twin.empty()) {
      auto sem = resolve(written, kids, path);
      if (sem != written.semantics) {
        name = written.twin;
        report.rewrites.push_back({path, written.name, name, Rewrite::Reason::string_variant});
      }
    }
    const auto* rule = GrammarRegistry::fixed().find(name);
    if (!rule) throw Error(Errc::LegacyParseError, "no fixed-grammar rule for '" + name + "'", path);
    return LfNode::rule(*rule, std::move(kids));
  }

  ConversionReport report;

 private:
  enum class Evidence { numeric, string, none };

  Evidence column_majority(const LfNode& c) const {
    if (c.type() != LfNode::Type::Column) return Evidence::none;
    auto col = table_.column_index(c.text());
    if (!col) return Evidence::none;
    std::size_t numeric = 0, textual = 0;
    for (const auto& row : table_.rows) {
      auto v = coerce_cell(row[*col]);
      (v.is_num() || v.is_date() ? numeric : textual)++;
    }
    if (numeric == textual) return Evidence::none;
    return numeric > textual ? Evidence::numeric : Evidence::string;
  }

  Evidence subtree_evidence(const LfNode& n) const {
    if (!n.is_rule()) return Evidence::none;
    if (n.kind() == NodeKind::N) return Evidence::numeric;
    if (is_hop_family(n.rule())) {
      if (n.rule().semantics == ValueSemantics::numeric) return Evidence::numeric;
      return column_majority(n.child(1));
    }
    return Evidence::none;
  }

  // Literal first; without a decisive literal, the referenced columns decide.
  ValueSemantics resolve(const GrammarRule& r, const std::vector<NodePtr>& kids, const Path& path) {
    bool text_literal = false;
    std::vector<Evidence> evidence;
    for (const auto& k : kids) {
      if (k->type() == LfNode::Type::Value) {
        auto v = coerce_cell(k->text());
        if (v.is_num() || v.is_date()) return ValueSemantics::numeric;
        text_literal = true;
      }
    }
    if (r.args.size() == 3) {
      evidence.push_back(column_majority(*kids[1]));
    } else {
      for (const auto& k : kids) evidence.push_back(subtree_evidence(*k));
    }
    bool any_numeric = std::find(evidence.begin(), evidence.end(), Evidence::numeric) != evidence.end();
    bool any_string = std::find(evidence.begin(), evidence.end(), Evidence::string) != evidence.end();
    if (text_literal) {
      if (any_numeric) conflict(r, path, "textual literal against numeric operand");
      return ValueSemantics::string;
    }
    if (any_numeric && any_string) {
      conflict(r, path, "numeric and textual operands");
      return ValueSemantics::string;
    }
    if (any_numeric) return ValueSemantics::numeric;
    if (any_string) return ValueSemantics::string;
    return r.semantics;
  }

  void conflict(const GrammarRule& r, const Path& path, const std::string& why) {
    report.warnings.push_back(
        {Errc::UnresolvableVariant, path, r.name + ": " + why + "; defaulting to the string variant"});
  }

  const Table& table_;
};

}  // namespace detail

// Rewrites a source-grammar LF into the disambiguated grammar. Twin rules are
// resolved from operand typing; hop-family rules applied to a View become the
// hop_first variants.
inline Conversion convert_legacy(std::string_view lf_text, const Table& table) {
  NodePtr tree;
  try {
    tree = parse_tree(strip_true_marker(lf_text), GrammarRegistry::legacy(), ParseOptions{.lenient_hop = true});
  } catch (const Error& e) {
    throw Error(Errc::LegacyParseError, e.detail(), e.path());
  }
  detail::LegacyConverter conv(table);
  auto root = conv.convert(tree, {});
  return Conversion{LogicalForm(std::move(root)), std::move(conv.report)};
}

// Root truth under source-grammar semantics, or nullopt when evaluation fails.
inline std::optional<bool> execute_legacy(std::string_view lf_text, const Table& table, ExecConfig cfg = {}) {
  cfg.semantics = Semantics::legacy;
  NodePtr tree;
  try {
    tree = parse_tree(strip_true_marker(lf_text), GrammarRegistry::legacy(), ParseOptions{.lenient_hop = true});
  } catch (const Error&) {
    return std::nullopt;
  }
  auto res = evaluate(*tree, table, cfg);
  if (!res.value || !res.value->is_bool()) return std::nullopt;
  return res.value->as_bool();
}

}  // namespace tlt
