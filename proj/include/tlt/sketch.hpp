#pragma once

#include <span>
#include <string>
#include <vector>

#include "tlt/lf.hpp"

namespace tlt {

namespace detail {
inline NodePtr strip_leaves(const NodePtr& n) {
  if (!n->is_rule()) return n->type() == LfNode::Type::Placeholder ? n : LfNode::placeholder(n->kind());
  if (n->children().empty()) return n;
  std::vector<NodePtr> kids;
  kids.reserve(n->children().size());
  for (const auto& c : n->children()) kids.push_back(strip_leaves(c));
  return LfNode::rule(n->rule(), std::move(kids));
}
}  // namespace detail

inline Sketch extract_sketch(const LogicalForm& lf) { return Sketch(detail::strip_leaves(lf.root_ptr())); }
inline Sketch extract_sketch(const Sketch& s) { return Sketch(detail::strip_leaves(s.root_ptr())); }

// Derivation symbols: rule names, or "[C]"/"[V]"/"[I]" for leaf slots.
using Symbol = std::string;

// Preorder derivation of a tree, leaves reduced to their kind token.
inline std::vector<Symbol> derivation(const LfNode& root) {
  std::vector<Symbol> out;
  walk(root, [&](const LfNode& n, const Path&) {
    out.push_back(n.is_rule() ? n.rule().name : std::string(placeholder_token(n.kind())));
  });
  return out;
}

// Symbols that may legally extend a left-to-right derivation prefix, sorted.
// Every non-leaf kind has a finite completion (all_rows, count, only, ...), so
// each returned symbol can be completed into a well-formed LF. An empty result
// means the prefix is already a complete tree.
inline std::vector<Symbol> grammar_successors(std::span<const Symbol> prefix,
                                              const GrammarRegistry& reg = GrammarRegistry::fixed()) {
  std::vector<NodeKind> pending{NodeKind::Stat};  // open slots, top at back
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    const auto& sym = prefix[i];
    if (pending.empty())
      throw Error(Errc::InvalidPrefix, "symbol '" + sym + "' after a complete tree (position " +
                                           std::to_string(i) + ")");
    NodeKind slot = pending.back();
    pending.pop_back();
    if (sym == "[C]" || sym == "[V]" || sym == "[I]") {
      NodeKind k = sym == "[C]" ? NodeKind::C : sym == "[V]" ? NodeKind::V : NodeKind::I;
      if (!slot_accepts(slot, k))
        throw Error(Errc::InvalidPrefix, sym + " cannot fill a " + std::string(to_string(slot)) +
                                             " slot (position " + std::to_string(i) + ")");
      continue;
    }
    const auto* r = reg.find(sym);
    if (!r) throw Error(Errc::InvalidPrefix, "unknown symbol '" + sym + "'");
    if (!slot_accepts(slot, r->result))
      throw Error(Errc::InvalidPrefix, sym + " cannot fill a " + std::string(to_string(slot)) +
                                           " slot (position " + std::to_string(i) + ")");
    for (auto it = r->args.rbegin(); it != r->args.rend(); ++it) pending.push_back(*it);
  }
  std::vector<Symbol> out;
  if (pending.empty()) return out;
  NodeKind slot = pending.back();
  for (const auto* r : reg.slot_rules(slot)) out.push_back(r->name);
  for (auto leaf : {NodeKind::C, NodeKind::V, NodeKind::I})
    if (slot_accepts(slot, leaf)) out.emplace_back(placeholder_token(leaf));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace tlt
