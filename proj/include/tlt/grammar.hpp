#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tlt/common.hpp"
#include "tlt/grammar_table.hpp"

namespace tlt {

enum class NodeKind : std::uint8_t { Stat, View, N, Row, Obj, C, V, I };

inline constexpr std::array<NodeKind, 8> kAllKinds = {
    NodeKind::Stat, NodeKind::View, NodeKind::N, NodeKind::Row,
    NodeKind::Obj,  NodeKind::C,    NodeKind::V, NodeKind::I};

constexpr std::string_view to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Stat: return "Stat";
    case NodeKind::View: return "View";
    case NodeKind::N: return "N";
    case NodeKind::Row: return "Row";
    case NodeKind::Obj: return "Obj";
    case NodeKind::C: return "C";
    case NodeKind::V: return "V";
    case NodeKind::I: return "I";
  }
  return "?";
}

inline std::optional<NodeKind> kind_from_string(std::string_view s) {
  for (auto k : kAllKinds)
    if (to_string(k) == s) return k;
  return std::nullopt;
}

constexpr bool is_leaf_kind(NodeKind k) {
  return k == NodeKind::C || k == NodeKind::V || k == NodeKind::I;
}

// Whether a subtree of kind `child` may fill an argument slot of kind `slot`.
// Obj slots (comparison and diff operands) also take numeric results and
// literal values; every other slot requires an exact kind.
constexpr bool slot_accepts(NodeKind slot, NodeKind child) {
  if (slot == child) return true;
  return slot == NodeKind::Obj && (child == NodeKind::N || child == NodeKind::V);
}

enum class ValueSemantics : std::uint8_t { numeric, string, agnostic };

constexpr std::string_view to_string(ValueSemantics s) {
  switch (s) {
    case ValueSemantics::numeric: return "numeric";
    case ValueSemantics::string: return "string";
    case ValueSemantics::agnostic: return "agnostic";
  }
  return "?";
}

enum class RuleOrigin : std::uint8_t { original, added, legacy };

struct GrammarRule {
  std::string name;
  NodeKind result = NodeKind::Stat;
  std::vector<NodeKind> args;
  ValueSemantics semantics = ValueSemantics::agnostic;
  std::string twin;  // empty when the rule has no numeric/string counterpart
  RuleOrigin origin = RuleOrigin::original;
  std::string note;

  std::size_t arity() const { return args.size(); }
  bool flagged() const { return !note.empty() && note.front() == '?'; }
};

inline bool is_hop_family(const GrammarRule& r) {
  return r.name == "hop" || r.name == "str_hop" || r.name == "num_hop" ||
         r.name == "str_hop_first" || r.name == "num_hop_first";
}

inline bool is_hop_first(const GrammarRule& r) {
  return r.name == "str_hop_first" || r.name == "num_hop_first";
}

class GrammarRegistry {
 public:
  enum class Flavor { fixed, legacy };

  // Parses a declarative rule table (see grammar_table.hpp for the layout).
  static GrammarRegistry from_table(std::string_view table, Flavor flavor = Flavor::fixed) {
    GrammarRegistry reg;
    std::istringstream in{std::string(table)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto trimmed = text::normalize_ws(line);
      if (trimmed.empty() || trimmed.front() == '#') continue;
      std::istringstream fields(trimmed);
      std::string name, result, args, sem, twin, origin;
      if (!(fields >> name >> result >> args >> sem >> twin >> origin))
        throw Error(Errc::InvalidGrammar, "line " + std::to_string(lineno) + ": expected 6 fields");
      std::string note;
      std::getline(fields, note);
      GrammarRule rule;
      rule.name = name;
      rule.note = text::normalize_ws(note);
      auto rk = kind_from_string(result);
      if (!rk || is_leaf_kind(*rk))
        throw Error(Errc::InvalidGrammar, "line " + std::to_string(lineno) + ": bad result kind " + result);
      rule.result = *rk;
      if (args != "-") {
        std::istringstream as(args);
        std::string a;
        while (std::getline(as, a, ',')) {
          auto k = kind_from_string(a);
          if (!k) throw Error(Errc::InvalidGrammar, "line " + std::to_string(lineno) + ": bad arg kind " + a);
          rule.args.push_back(*k);
        }
      }
      if (sem == "numeric") rule.semantics = ValueSemantics::numeric;
      else if (sem == "string") rule.semantics = ValueSemantics::string;
      else if (sem == "agnostic") rule.semantics = ValueSemantics::agnostic;
      else throw Error(Errc::InvalidGrammar, "line " + std::to_string(lineno) + ": bad semantics " + sem);
      if (twin != "-") rule.twin = twin;
      if (origin == "original") rule.origin = RuleOrigin::original;
      else if (origin == "added") rule.origin = RuleOrigin::added;
      else if (origin == "legacy") rule.origin = RuleOrigin::legacy;
      else throw Error(Errc::InvalidGrammar, "line " + std::to_string(lineno) + ": bad origin " + origin);

      if (flavor == Flavor::fixed && rule.origin == RuleOrigin::legacy) continue;
      if (reg.by_name_.count(rule.name))
        throw Error(Errc::InvalidGrammar, "duplicate rule " + rule.name);
      reg.by_name_[rule.name] = reg.rules_.size();
      reg.rules_.push_back(std::move(rule));
    }
    reg.flavor_ = flavor;
    reg.index();
    reg.check();
    return reg;
  }

  // The disambiguated grammar used everywhere except legacy conversion.
  static const GrammarRegistry& fixed() {
    static const GrammarRegistry reg = from_table(kGrammarTable, Flavor::fixed);
    return reg;
  }

  // Every rule in the table, including source-grammar spellings.
  static const GrammarRegistry& legacy() {
    static const GrammarRegistry reg = from_table(kGrammarTable, Flavor::legacy);
    return reg;
  }

  GrammarRegistry(GrammarRegistry&&) noexcept = default;
  GrammarRegistry& operator=(GrammarRegistry&&) noexcept = default;
  GrammarRegistry(const GrammarRegistry&) = delete;
  GrammarRegistry& operator=(const GrammarRegistry&) = delete;

  Flavor flavor() const { return flavor_; }
  const std::vector<GrammarRule>& rules() const { return rules_; }

  const GrammarRule* find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    return it == by_name_.end() ? nullptr : &rules_[it->second];
  }

  const GrammarRule& at(std::string_view name) const {
    if (auto* r = find(name)) return *r;
    throw Error(Errc::UnknownRule, std::string(name));
  }

  // Rules producing exactly `kind`, sorted by name.
  const std::vector<const GrammarRule*>& rules_for(NodeKind kind) const {
    return by_kind_[static_cast<std::size_t>(kind)];
  }

  // Rules whose result may fill a slot of `slot` kind, sorted by name.
  const std::vector<const GrammarRule*>& slot_rules(NodeKind slot) const {
    return by_slot_[static_cast<std::size_t>(slot)];
  }

 private:
  GrammarRegistry() = default;

  void index() {
    for (auto& v : by_kind_) v.clear();
    for (auto& v : by_slot_) v.clear();
    // by_name_ is ordered, so both indexes come out sorted by rule name.
    for (const auto& [name, idx] : by_name_) {
      const auto* r = &rules_[idx];
      by_kind_[static_cast<std::size_t>(r->result)].push_back(r);
      for (auto slot : kAllKinds)
        if (slot_accepts(slot, r->result)) by_slot_[static_cast<std::size_t>(slot)].push_back(r);
    }
  }

  void check() const {
    for (const auto& r : rules_) {
      if (!r.twin.empty()) {
        const auto* t = find(r.twin);
        if (!t) throw Error(Errc::InvalidGrammar, r.name + ": twin " + r.twin + " missing");
        if (t->twin != r.name) throw Error(Errc::InvalidGrammar, r.name + ": twin is not mutual");
        if (t->args != r.args || t->result != r.result)
          throw Error(Errc::InvalidGrammar, r.name + ": twin signature differs");
        if (r.semantics == t->semantics || r.semantics == ValueSemantics::agnostic)
          throw Error(Errc::InvalidGrammar, r.name + ": twins must split numeric/string");
      }
    }
    for (auto k : kAllKinds)
      if (!is_leaf_kind(k) && rules_for(k).empty())
        throw Error(Errc::InvalidGrammar, std::string("no rule produces ") + std::string(to_string(k)));
  }

  Flavor flavor_ = Flavor::fixed;
  std::vector<GrammarRule> rules_;
  std::map<std::string, std::size_t, std::less<>> by_name_;
  std::array<std::vector<const GrammarRule*>, 8> by_kind_;
  std::array<std::vector<const GrammarRule*>, 8> by_slot_;
};

}  // namespace tlt
