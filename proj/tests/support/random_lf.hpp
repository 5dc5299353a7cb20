#pragma once

#include <random>
#include <string>

#include "tlt/grammar.hpp"
#include "tlt/lf.hpp"

namespace tlt::testing {

// Leaf text drawn from an alphabet rich in characters that need escaping.
inline std::string random_leaf_text(std::mt19937_64& rng) {
  static const std::string alphabet = "abcxyz019 {};\\-.,()%";
  std::uniform_int_distribution<int> len(1, 8);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  while (true) {
    std::string s;
    int n = len(rng);
    for (int i = 0; i < n; ++i) s += alphabet[pick(rng)];
    s = text::normalize_ws(s);
    if (!s.empty()) return s;
  }
}

// Smallest height at which a subtree of `slot` kind exists.
inline std::size_t min_height(const GrammarRegistry& reg, NodeKind slot) {
  if (is_leaf_kind(slot) || slot == NodeKind::Obj) return 0;
  std::size_t best = 99;
  for (const auto* r : reg.slot_rules(slot)) {
    if (r->arity() == 0) return 0;
    std::size_t h = 0;
    for (auto a : r->args)
      if (a != slot) h = std::max(h, min_height(reg, a) + 1);
    if (h > 0) best = std::min(best, h);
  }
  return best;
}

// Random concrete subtree for `slot` no taller than `budget` (grown only when
// the slot cannot be closed within it).
inline NodePtr random_tree(const GrammarRegistry& reg, NodeKind slot, std::size_t budget, std::mt19937_64& rng) {
  if (slot == NodeKind::C) return LfNode::column(random_leaf_text(rng));
  if (slot == NodeKind::V) return LfNode::value(random_leaf_text(rng));
  if (slot == NodeKind::I) return LfNode::index(std::uniform_int_distribution<std::uint32_t>(1, 30)(rng));
  auto need = [&](const GrammarRule* r) {
    std::size_t n = 0;
    for (auto a : r->args) n = std::max(n, min_height(reg, a) + 1);
    return n;
  };
  std::size_t floor = 99;
  for (const auto* r : reg.slot_rules(slot)) floor = std::min(floor, need(r));
  std::vector<const GrammarRule*> options;
  for (const auto* r : reg.slot_rules(slot))
    if (need(r) <= std::max(budget, floor)) options.push_back(r);
  bool leaf_ok = slot == NodeKind::Obj;
  std::uniform_int_distribution<std::size_t> pick(0, options.size() - (leaf_ok ? 0 : 1));
  std::size_t i = pick(rng);
  if (i >= options.size()) return LfNode::value(random_leaf_text(rng));
  const auto* r = options[i];
  std::vector<NodePtr> kids;
  for (auto a : r->args) kids.push_back(random_tree(reg, a, budget == 0 ? 0 : budget - 1, rng));
  return LfNode::rule(*r, std::move(kids));
}

inline LogicalForm random_lf(std::mt19937_64& rng, std::size_t max_height = 4,
                             const GrammarRegistry& reg = GrammarRegistry::fixed()) {
  std::uniform_int_distribution<std::size_t> h(1, max_height);
  return LogicalForm(random_tree(reg, NodeKind::Stat, h(rng), rng));
}

}  // namespace tlt::testing
