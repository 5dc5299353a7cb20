#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tlt/cs.hpp"
#include "tlt/exec.hpp"
#include "tlt/lf.hpp"
#include "tlt/sketch.hpp"
#include "tlt/table.hpp"
#include "tlt/validate.hpp"

namespace tlt {

struct SearchConfig {
  std::uint32_t beam_size = 2048;
  std::uint32_t max_steps = 50;  // longest derivation (node count) considered
  std::uint32_t max_sketch_depth = 5;
  bool use_fcr = true;
  bool require_cs_values = false;

  // score = w_cs * (fraction of CS values used) - w_depth * height - w_aux * (literals outside CS)
  double w_cs = 10.0;
  double w_depth = 1.0;
  double w_aux = 2.0;

  // Enumeration budgets. The sketch space grows without bound in depth, so
  // every search stops after these many sketches / filled candidates.
  std::uint64_t max_sketches = 4000;
  std::uint64_t max_fills_per_sketch = 2000;
  std::uint64_t max_total_fills = 100000;

  ExecConfig exec;

  void check() const {
    if (beam_size < 1) throw Error(Errc::InvalidConfig, "beam_size must be at least 1");
    if (max_steps < 1) throw Error(Errc::InvalidConfig, "max_steps must be positive");
    if (max_sketch_depth < 1) throw Error(Errc::InvalidConfig, "max_sketch_depth must be positive");
    if (max_sketches < 1 || max_fills_per_sketch < 1 || max_total_fills < 1)
      throw Error(Errc::InvalidConfig, "search budgets must be positive");
    exec.check();
  }
};

struct Candidate {
  LogicalForm lf;
  std::string text;  // serialized lf
  double score = 0;
  bool executes_true = false;
  std::vector<std::string> uses_cs;  // sorted, distinct
};

// Ranking order: higher score first, then serialized text.
inline bool ranks_before(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.text < b.text;
}

namespace detail {

// Lazily enumerates every placeholder tree of height <= max_height that can
// fill `slot`, in lexicographic order of the preorder symbol sequence. Child
// positions advance like an odometer, the last one fastest.
class TreeCursor {
 public:
  TreeCursor(const GrammarRegistry& reg, NodeKind slot, std::size_t max_height, const GrammarRule* only = nullptr)
      : reg_(reg), max_height_(max_height) {
    if (only) {
      if (slot_accepts(slot, only->result) && (only->arity() == 0 || max_height >= 1)) options_.push_back({only, {}});
      return;
    }
    for (auto leaf : {NodeKind::C, NodeKind::I, NodeKind::V})
      if (slot_accepts(slot, leaf)) options_.push_back({nullptr, leaf});
    for (const auto* r : reg.slot_rules(slot))
      if (r->arity() == 0 || max_height >= 1) options_.push_back({r, {}});
    std::stable_sort(options_.begin(), options_.end(),
                     [](const Option& a, const Option& b) { return a.token() < b.token(); });
  }

  void reset() {
    opt_ = 0;
    started_ = false;
    kids_.clear();
    cur_.clear();
  }

  NodePtr next() {
    while (opt_ < options_.size()) {
      const auto& o = options_[opt_];
      if (!o.rule || o.rule->arity() == 0) {
        if (!started_) {
          started_ = true;
          return o.rule ? LfNode::rule(*o.rule) : LfNode::placeholder(*o.leaf);
        }
        advance_option();
        continue;
      }
      if (!started_) {
        started_ = true;
        kids_.clear();
        cur_.clear();
        bool ok = true;
        for (auto k : o.rule->args) {
          kids_.push_back(std::make_unique<TreeCursor>(reg_, k, max_height_ - 1));
          auto t = kids_.back()->next();
          if (!t) {
            ok = false;
            break;
          }
          cur_.push_back(std::move(t));
        }
        if (ok) return LfNode::rule(*o.rule, cur_);
        advance_option();
        continue;
      }
      for (std::size_t i = kids_.size(); i-- > 0;) {
        if (auto t = kids_[i]->next()) {
          cur_[i] = std::move(t);
          for (std::size_t j = i + 1; j < kids_.size(); ++j) {
            kids_[j]->reset();
            cur_[j] = kids_[j]->next();
          }
          return LfNode::rule(*o.rule, cur_);
        }
      }
      advance_option();
    }
    return nullptr;
  }

 private:
  struct Option {
    const GrammarRule* rule;
    std::optional<NodeKind> leaf;
    std::string token() const { return rule ? rule->name : std::string(placeholder_token(*leaf)); }
  };

  void advance_option() {
    ++opt_;
    started_ = false;
    kids_.clear();
    cur_.clear();
  }

  const GrammarRegistry& reg_;
  std::size_t max_height_;
  std::vector<Option> options_;
  std::size_t opt_ = 0;
  bool started_ = false;
  std::vector<std::unique_ptr<TreeCursor>> kids_;
  std::vector<NodePtr> cur_;
};

inline std::size_t node_count(const LfNode& n) {
  std::size_t c = 1;
  for (const auto& k : n.children()) c += node_count(*k);
  return c;
}

}  // namespace detail

// Every sketch of height 1..max_depth: shallower first, then lexicographic by
// the preorder rule sequence. Sketches with more than max_steps nodes are
// skipped. Restartable through reset().
class SketchEnumerator {
 public:
  explicit SketchEnumerator(const GrammarRegistry& reg = GrammarRegistry::fixed(), std::size_t max_depth = 5,
                            std::size_t max_steps = 50, const GrammarRule* root_rule = nullptr)
      : reg_(reg), max_depth_(max_depth), max_steps_(max_steps), root_rule_(root_rule) {
    reset();
  }

  SketchEnumerator(const GrammarRegistry& reg, const SearchConfig& cfg)
      : SketchEnumerator(reg, cfg.max_sketch_depth, cfg.max_steps) {}

  void reset() { start_height(1); }

  // Restricts the stream to one height (used by generate to interleave roots).
  void only_height(std::size_t h) {
    max_depth_ = h;
    start_height(h);
  }

  std::optional<Sketch> next() {
    while (cursor_) {
      auto t = cursor_->next();
      if (!t) {
        if (height_ >= max_depth_) {
          cursor_.reset();
          break;
        }
        start_height(height_ + 1);
        continue;
      }
      if (t->height() != height_) continue;
      if (detail::node_count(*t) > max_steps_) continue;
      return Sketch(std::move(t));
    }
    return std::nullopt;
  }

  std::size_t current_height() const { return height_; }

 private:
  void start_height(std::size_t h) {
    height_ = h;
    cursor_ = h <= max_depth_ ? std::make_unique<detail::TreeCursor>(reg_, NodeKind::Stat, h, root_rule_) : nullptr;
  }

  const GrammarRegistry& reg_;
  std::size_t max_depth_;
  std::size_t max_steps_;
  const GrammarRule* root_rule_;
  std::size_t height_ = 1;
  std::unique_ptr<detail::TreeCursor> cursor_;
};

// Convenience: the first `limit` sketches of the enumeration.
inline std::vector<Sketch> enumerate_sketches(const GrammarRegistry& reg, const SearchConfig& cfg,
                                              std::size_t limit) {
  SketchEnumerator e(reg, cfg);
  std::vector<Sketch> out;
  while (out.size() < limit) {
    auto s = e.next();
    if (!s) break;
    out.push_back(std::move(*s));
  }
  return out;
}

namespace detail {

struct LeafSlot {
  Path path;
  NodeKind kind;
  std::optional<Path> column;  // C placeholder whose column supplies V literals
};

// Column placeholder referenced by a V slot: the C argument of the same rule,
// else the C argument of the first sibling N/Obj subtree that has one.
inline std::optional<Path> referenced_column(const LfNode& root, const Path& vpath) {
  if (vpath.empty()) return std::nullopt;
  Path parent_path(vpath.begin(), vpath.end() - 1);
  const LfNode* parent = root.at(parent_path);
  const auto& r = parent->rule();
  for (std::size_t i = 0; i < r.arity(); ++i)
    if (r.args[i] == NodeKind::C) return child_path(parent_path, i);
  for (std::size_t i = 0; i < parent->children().size(); ++i) {
    if (i == vpath.back()) continue;
    const LfNode& sib = parent->child(i);
    if (!sib.is_rule()) continue;
    const auto& sr = sib.rule();
    for (std::size_t j = 0; j < sr.arity(); ++j)
      if (sr.args[j] == NodeKind::C) return child_path(child_path(parent_path, i), j);
  }
  return std::nullopt;
}

inline NodePtr substitute(const NodePtr& n, const Path& path, const std::map<Path, NodePtr>& leaves) {
  if (n->type() == LfNode::Type::Placeholder) return leaves.at(path);
  if (!n->is_rule() || n->children().empty()) return n;
  std::vector<NodePtr> kids;
  kids.reserve(n->children().size());
  for (std::size_t i = 0; i < n->children().size(); ++i)
    kids.push_back(substitute(n->children()[i], child_path(path, i), leaves));
  return LfNode::rule(n->rule(), std::move(kids));
}

// Distinct normalized literals drawn from a column: whole cells, then first tokens.
inline std::vector<std::string> column_literals(const Table& table, std::size_t col) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  auto add = [&](std::string s) {
    if (!s.empty() && seen.insert(s).second) out.push_back(std::move(s));
  };
  for (const auto& row : table.rows) add(text::normalize_ws(row[col]));
  for (const auto& row : table.rows) {
    auto cell = text::normalize_ws(row[col]);
    auto sp = cell.find(' ');
    if (sp != std::string::npos) add(cell.substr(0, sp));
  }
  return out;
}

inline std::vector<std::string> distinct_texts(const std::vector<CsValue>& cs) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& v : cs) {
    auto t = text::normalize_ws(v.text);
    if (!t.empty() && seen.insert(t).second) out.push_back(t);
  }
  return out;
}

inline std::vector<std::string> tab_texts(const std::vector<CsValue>& cs) {
  std::vector<CsValue> tab;
  for (const auto& v : cs)
    if (v.category == CsCategory::TAB) tab.push_back(v);
  return distinct_texts(tab);
}

}  // namespace detail

// Domains used when filling a sketch; exposed so tests can rebuild the cross product.
struct FillDomains {
  std::vector<std::string> columns;             // distinct non-empty names, table order
  std::uint32_t max_ordinal = 0;                // I ranges over 1..max_ordinal
  std::vector<std::string> cs_texts;            // distinct CS texts, input order
  std::vector<std::string> required;            // TAB texts that must appear
};

inline FillDomains fill_domains(const Table& table, const std::vector<CsValue>& cs, const SearchConfig& cfg) {
  FillDomains d;
  std::set<std::string> seen;
  for (const auto& c : table.columns) {
    auto n = text::normalize_ws(c);
    if (!n.empty() && seen.insert(n).second) d.columns.push_back(n);
  }
  d.max_ordinal = static_cast<std::uint32_t>(std::min<std::size_t>(cfg.exec.max_index, table.rows.size()));
  d.cs_texts = detail::distinct_texts(cs);
  d.required = detail::tab_texts(cs);
  return d;
}

// Enumerates leaf assignments of `sketch`: C and I slots first in preorder,
// then V slots. V takes CS texts plus literals of its referenced column, or
// only unused CS texts under require_cs_values. The visitor returns false to
// stop. Returns the number of candidates produced.
inline std::uint64_t for_each_fill(const Sketch& sketch, const Table& table, const std::vector<CsValue>& cs,
                                   const SearchConfig& cfg, const std::function<bool(Candidate&&)>& visit) {
  auto dom = fill_domains(table, cs, cfg);
  std::vector<detail::LeafSlot> slots, vslots;
  walk(sketch.root(), [&](const LfNode& n, const Path& p) {
    if (n.type() != LfNode::Type::Placeholder) return;
    if (n.kind() == NodeKind::V)
      vslots.push_back({p, NodeKind::V, detail::referenced_column(sketch.root(), p)});
    else
      slots.push_back({p, n.kind(), std::nullopt});
  });
  if (cfg.require_cs_values && (vslots.size() > dom.cs_texts.size() || vslots.size() < dom.required.size()))
    return 0;
  slots.insert(slots.end(), vslots.begin(), vslots.end());

  std::set<std::string> cs_set(dom.cs_texts.begin(), dom.cs_texts.end());
  std::map<Path, NodePtr> leaves;
  std::map<Path, std::string> column_of;  // chosen column name per C path
  std::vector<std::string> used_values;
  std::uint64_t produced = 0;
  bool stop = false;

  auto finish = [&] {
    std::set<std::string> uses;
    std::size_t aux_like = 0;
    for (const auto& v : used_values) {
      if (cs_set.count(v)) uses.insert(v);
      else ++aux_like;
    }
    if (cfg.require_cs_values)
      for (const auto& t : dom.required)
        if (!uses.count(t)) return;
    LogicalForm lf(detail::substitute(sketch.root_ptr(), {}, leaves));
    Candidate c{lf, serialize_lf(lf), 0, fcr_accept(lf, table, cfg.exec), {uses.begin(), uses.end()}};
    double frac = dom.cs_texts.empty() ? 0.0
                                       : static_cast<double>(uses.size()) / static_cast<double>(dom.cs_texts.size());
    c.score = cfg.w_cs * frac - cfg.w_depth * static_cast<double>(lf.root().height()) -
              cfg.w_aux * static_cast<double>(aux_like);
    ++produced;
    if (!visit(std::move(c)) || produced >= cfg.max_fills_per_sketch) stop = true;
  };

  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (stop) return;
    if (i == slots.size()) {
      finish();
      return;
    }
    const auto& s = slots[i];
    switch (s.kind) {
      case NodeKind::C:
        for (const auto& c : dom.columns) {
          leaves[s.path] = LfNode::column(c);
          column_of[s.path] = c;
          rec(i + 1);
          if (stop) return;
        }
        return;
      case NodeKind::I:
        for (std::uint32_t k = 1; k <= dom.max_ordinal; ++k) {
          leaves[s.path] = LfNode::index(k);
          rec(i + 1);
          if (stop) return;
        }
        return;
      default: break;
    }
    std::vector<std::string> values;
    if (cfg.require_cs_values) {
      for (const auto& t : dom.cs_texts)
        if (std::find(used_values.begin(), used_values.end(), t) == used_values.end()) values.push_back(t);
    } else {
      values = dom.cs_texts;
      if (s.column) {
        auto col = table.column_index(column_of.at(*s.column));
        for (auto& lit : detail::column_literals(table, *col))
          if (std::find(values.begin(), values.end(), lit) == values.end()) values.push_back(std::move(lit));
      }
    }
    for (const auto& v : values) {
      leaves[s.path] = LfNode::value(v);
      used_values.push_back(v);
      rec(i + 1);
      used_values.pop_back();
      if (stop) return;
    }
  };
  rec(0);
  return produced;
}

inline std::vector<Candidate> fill_sketch(const Sketch& sketch, const Table& table, const std::vector<CsValue>& cs,
                                          const SearchConfig& cfg) {
  std::vector<Candidate> out;
  for_each_fill(sketch, table, cs, cfg, [&](Candidate&& c) {
    out.push_back(std::move(c));
    return true;
  });
  return out;
}

struct SearchStats {
  std::uint64_t sketches = 0;
  std::uint64_t fills = 0;
  std::uint64_t rejected = 0;  // dropped by FCR
};

// Sketch-then-fill search. Heights are explored in increasing order; within a
// height the root rules take turns, one sketch each, so that a single root
// cannot exhaust the sketch budget. The beam keeps the best beam_size
// candidates by (score desc, text asc).
inline std::vector<Candidate> generate(const Table& table, const std::vector<CsValue>& cs, const SearchConfig& cfg,
                                       const GrammarRegistry& reg = GrammarRegistry::fixed(),
                                       SearchStats* stats = nullptr) {
  cfg.check();
  SearchStats local;
  SearchStats& st = stats ? *stats : local;
  auto cmp = [](const Candidate& a, const Candidate& b) { return ranks_before(a, b); };
  std::set<Candidate, decltype(cmp)> beam(cmp);
  bool exhausted = false;

  auto process = [&](const Sketch& sk) {
    ++st.sketches;
    for_each_fill(sk, table, cs, cfg, [&](Candidate&& c) {
      ++st.fills;
      if (st.fills >= cfg.max_total_fills) exhausted = true;
      if (cfg.use_fcr && !c.executes_true) {
        ++st.rejected;
        return !exhausted;
      }
      if (beam.size() < cfg.beam_size || ranks_before(c, *std::prev(beam.end()))) {
        beam.insert(std::move(c));
        if (beam.size() > cfg.beam_size) beam.erase(std::prev(beam.end()));
      }
      return !exhausted;
    });
    if (st.sketches >= cfg.max_sketches) exhausted = true;
  };

  const auto& roots = reg.rules_for(NodeKind::Stat);
  for (std::size_t h = 1; h <= cfg.max_sketch_depth && !exhausted; ++h) {
    std::vector<std::unique_ptr<SketchEnumerator>> streams;
    for (const auto* r : roots) {
      streams.push_back(std::make_unique<SketchEnumerator>(reg, h, cfg.max_steps, r));
      streams.back()->only_height(h);
    }
    bool any = true;
    while (any && !exhausted) {
      any = false;
      for (auto& s : streams) {
        if (!s || exhausted) continue;
        auto sk = s->next();
        if (!sk) {
          s.reset();
          continue;
        }
        any = true;
        process(*sk);
      }
    }
  }
  if (beam.empty()) throw Error(Errc::NoCandidate, "no candidate within the search budget");
  return {std::make_move_iterator(beam.begin()), std::make_move_iterator(beam.end())};
}

}  // namespace tlt
