#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tlt/common.hpp"
#include "tlt/grammar.hpp"

namespace tlt {

class LfNode;
using NodePtr = std::shared_ptr<const LfNode>;

// Immutable LF tree node. Subtrees are shared, never mutated.
class LfNode {
 public:
  enum class Type : std::uint8_t { Rule, Column, Value, Index, Placeholder };

  static NodePtr rule(const GrammarRule& r, std::vector<NodePtr> children = {}) {
    auto n = std::shared_ptr<LfNode>(new LfNode(Type::Rule));
    n->rule_ = &r;
    n->children_ = std::move(children);
    for (const auto& c : n->children_) n->height_ = std::max(n->height_, c->height_ + 1);
    return n;
  }
  static NodePtr column(std::string name) { return leaf(Type::Column, std::move(name)); }
  static NodePtr value(std::string text) { return leaf(Type::Value, std::move(text)); }
  static NodePtr index(std::uint32_t ordinal) {
    auto n = std::shared_ptr<LfNode>(new LfNode(Type::Index));
    n->ordinal_ = ordinal;
    return n;
  }
  static NodePtr placeholder(NodeKind kind) {
    auto n = std::shared_ptr<LfNode>(new LfNode(Type::Placeholder));
    n->placeholder_kind_ = kind;
    return n;
  }

  Type type() const { return type_; }
  bool is_rule() const { return type_ == Type::Rule; }
  bool is_leaf() const { return type_ != Type::Rule; }

  const GrammarRule& rule() const { return *rule_; }
  const std::vector<NodePtr>& children() const { return children_; }
  const LfNode& child(std::size_t i) const { return *children_.at(i); }
  const std::string& text() const { return text_; }
  std::uint32_t ordinal() const { return ordinal_; }

  NodeKind kind() const {
    switch (type_) {
      case Type::Rule: return rule_->result;
      case Type::Column: return NodeKind::C;
      case Type::Value: return NodeKind::V;
      case Type::Index: return NodeKind::I;
      case Type::Placeholder: return placeholder_kind_;
    }
    return NodeKind::V;
  }

  // Edges on the longest root-to-leaf path; leaves and nullary rules have height 0.
  std::size_t height() const { return height_; }

  // Node at `path`, or nullptr when the path leaves the tree.
  const LfNode* at(const Path& path) const {
    const LfNode* n = this;
    for (auto i : path) {
      if (i >= n->children_.size()) return nullptr;
      n = n->children_[i].get();
    }
    return n;
  }

  friend bool operator==(const LfNode& a, const LfNode& b) {
    if (&a == &b) return true;
    if (a.type_ != b.type_) return false;
    switch (a.type_) {
      case Type::Rule:
        if (a.rule_->name != b.rule_->name || a.children_.size() != b.children_.size()) return false;
        for (std::size_t i = 0; i < a.children_.size(); ++i)
          if (!(*a.children_[i] == *b.children_[i])) return false;
        return true;
      case Type::Column:
      case Type::Value: return a.text_ == b.text_;
      case Type::Index: return a.ordinal_ == b.ordinal_;
      case Type::Placeholder: return a.placeholder_kind_ == b.placeholder_kind_;
    }
    return false;
  }

 private:
  explicit LfNode(Type t) : type_(t) {}
  static NodePtr leaf(Type t, std::string s) {
    auto n = std::shared_ptr<LfNode>(new LfNode(t));
    n->text_ = std::move(s);
    return n;
  }

  Type type_;
  const GrammarRule* rule_ = nullptr;
  std::vector<NodePtr> children_;
  std::string text_;
  std::uint32_t ordinal_ = 0;
  NodeKind placeholder_kind_ = NodeKind::V;
  std::size_t height_ = 0;
};

// Preorder walk; the visitor receives each node with its path.
inline void walk(const LfNode& node, const std::function<void(const LfNode&, const Path&)>& visit,
                 Path path = {}) {
  visit(node, path);
  for (std::size_t i = 0; i < node.children().size(); ++i)
    walk(node.child(i), visit, child_path(path, i));
}

// Kind/arity violations in a rule tree, reported as (code, path, message).
struct StructuralIssue {
  Errc code;
  Path path;
  std::string message;
};

inline std::vector<StructuralIssue> structural_issues(const LfNode& root, bool allow_placeholders) {
  std::vector<StructuralIssue> out;
  if (root.kind() != NodeKind::Stat)
    out.push_back({Errc::RootNotStat, {}, "root is " + std::string(to_string(root.kind()))});
  walk(root, [&](const LfNode& n, const Path& p) {
    if (n.type() == LfNode::Type::Placeholder && !allow_placeholders)
      out.push_back({Errc::BadLeaf, p, "placeholder in a concrete LF"});
    if (!n.is_rule()) return;
    const auto& r = n.rule();
    if (n.children().size() != r.arity()) {
      out.push_back({Errc::ArityMismatch, p,
                     r.name + " expects " + std::to_string(r.arity()) + " arguments, got " +
                         std::to_string(n.children().size())});
      return;
    }
    for (std::size_t i = 0; i < r.arity(); ++i) {
      auto got = n.child(i).kind();
      if (!slot_accepts(r.args[i], got))
        out.push_back({Errc::KindMismatch, child_path(p, i),
                       r.name + " argument " + std::to_string(i) + " expects " +
                           std::string(to_string(r.args[i])) + ", got " + std::string(to_string(got))});
    }
  });
  return out;
}

// A well-formed LF: Stat root, every rule node typed by the grammar.
class LogicalForm {
 public:
  explicit LogicalForm(NodePtr root) : root_(std::move(root)) {
    if (!root_) throw Error(Errc::RootNotStat, "empty LF");
    auto issues = structural_issues(*root_, false);
    if (!issues.empty()) throw Error(issues.front().code, issues.front().message, issues.front().path);
  }

  const LfNode& root() const { return *root_; }
  const NodePtr& root_ptr() const { return root_; }

  friend bool operator==(const LogicalForm& a, const LogicalForm& b) { return *a.root_ == *b.root_; }

 private:
  NodePtr root_;
};

// An LF skeleton whose C, V and I leaves are kind-tagged placeholders.
class Sketch {
 public:
  explicit Sketch(NodePtr root) : root_(std::move(root)) {
    if (!root_) throw Error(Errc::RootNotStat, "empty sketch");
    auto issues = structural_issues(*root_, true);
    if (!issues.empty()) throw Error(issues.front().code, issues.front().message, issues.front().path);
    walk(*root_, [](const LfNode& n, const Path& p) {
      if (n.type() != LfNode::Type::Rule && n.type() != LfNode::Type::Placeholder)
        throw Error(Errc::BadLeaf, "concrete leaf in a sketch", p);
    });
  }

  const LfNode& root() const { return *root_; }
  const NodePtr& root_ptr() const { return root_; }
  std::size_t height() const { return root_->height(); }

  friend bool operator==(const Sketch& a, const Sketch& b) { return *a.root_ == *b.root_; }

 private:
  NodePtr root_;
};

constexpr std::string_view placeholder_token(NodeKind k) {
  switch (k) {
    case NodeKind::C: return "[C]";
    case NodeKind::V: return "[V]";
    case NodeKind::I: return "[I]";
    default: return "[?]";
  }
}

// ---------------------------------------------------------------------------
// Linearized text format

namespace detail {

inline bool is_special(char c) { return c == '{' || c == '}' || c == ';' || c == '\\'; }

inline std::string escape_leaf(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (is_special(c)) out += '\\';
    out += c;
  }
  return out;
}

inline void serialize_into(const LfNode& n, std::string& out) {
  switch (n.type()) {
    case LfNode::Type::Rule:
      out += n.rule().name;
      if (n.children().empty()) return;
      out += " {";
      for (std::size_t i = 0; i < n.children().size(); ++i) {
        out += i == 0 ? " " : " ; ";
        serialize_into(n.child(i), out);
      }
      out += " }";
      return;
    case LfNode::Type::Column:
    case LfNode::Type::Value: out += escape_leaf(n.text()); return;
    case LfNode::Type::Index: out += std::to_string(n.ordinal()); return;
    case LfNode::Type::Placeholder: out += placeholder_token(n.kind()); return;
  }
}

struct Token {
  enum class Type { Open, Close, Sep, Text, End } type;
  std::string text;  // whitespace-normalized, escapes resolved
  std::size_t offset = 0;
};

inline std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  std::string raw;
  bool have_text = false;
  std::size_t start = 0;
  auto flush = [&] {
    if (have_text) out.push_back({Token::Type::Text, text::normalize_ws(raw), start});
    raw.clear();
    have_text = false;
  };
  for (std::size_t i = 0; i < src.size(); ++i) {
    char c = src[i];
    if (c == '\\' && i + 1 < src.size()) {
      if (!have_text) start = i;
      have_text = true;
      // Escaped whitespace would be collapsed anyway; keep it literal.
      raw += src[++i];
      continue;
    }
    if (c == '{' || c == '}' || c == ';') {
      flush();
      out.push_back({c == '{' ? Token::Type::Open : c == '}' ? Token::Type::Close : Token::Type::Sep,
                     std::string(1, c), i});
      continue;
    }
    if (!have_text && text::is_space(c)) continue;
    if (!have_text) start = i;
    have_text = true;
    raw += c;
  }
  flush();
  out.push_back({Token::Type::End, "", src.size()});
  return out;
}

// Untyped syntax tree: a text head with optional braced arguments.
struct Syntax {
  std::string head;
  bool call = false;  // head was followed by '{'
  std::vector<Syntax> args;
  std::size_t offset = 0;
};

class SyntaxParser {
 public:
  explicit SyntaxParser(std::string_view src) : toks_(tokenize(src)) {}

  Syntax parse_root() {
    auto root = parse_expr();
    const auto& t = peek();
    if (t.type == Token::Type::Close)
      throw Error(Errc::UnbalancedBraces, "unmatched '}' at offset " + std::to_string(t.offset));
    if (t.type != Token::Type::End)
      throw Error(Errc::UnexpectedToken, "trailing input '" + t.text + "' at offset " + std::to_string(t.offset));
    return root;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  Syntax parse_expr() {
    Syntax s;
    s.offset = peek().offset;
    if (peek().type == Token::Type::Text) s.head = take().text;
    if (peek().type != Token::Type::Open) return s;
    take();
    s.call = true;
    while (true) {
      s.args.push_back(parse_expr());
      const auto& t = take();
      if (t.type == Token::Type::Sep) continue;
      if (t.type == Token::Type::Close) break;
      if (t.type == Token::Type::End)
        throw Error(Errc::UnbalancedBraces, "missing '}' for '" + s.head + "'");
      throw Error(Errc::UnexpectedToken, "unexpected '" + t.text + "' at offset " + std::to_string(t.offset));
    }
    return s;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace detail

struct ParseOptions {
  bool allow_placeholders = false;
  // Source-grammar leniency: hop-family rules may take a View where a Row is expected.
  bool lenient_hop = false;
};

// Types an untyped syntax tree against a registry.
class TreeBuilder {
 public:
  TreeBuilder(const GrammarRegistry& reg, ParseOptions opts) : reg_(reg), opts_(opts) {}

  NodePtr build_root(const detail::Syntax& s) {
    const GrammarRule* r = reg_.find(s.head);
    if (!r && !s.call) throw Error(Errc::RootNotStat, "root '" + s.head + "' is a leaf");
    if (r && r->result != NodeKind::Stat)
      throw Error(Errc::RootNotStat, "root rule " + r->name + " yields " + std::string(to_string(r->result)));
    return build(s, NodeKind::Stat, {}, nullptr);
  }

 private:
  static bool is_placeholder_text(std::string_view t) { return t == "[C]" || t == "[V]" || t == "[I]"; }

  NodePtr build(const detail::Syntax& s, NodeKind slot, const Path& path, const GrammarRule* parent) {
    if (s.call) return build_call(s, slot, path, parent);
    // Bare word: nullary rule, leaf, or a rule used without its arguments.
    if (const auto* r = reg_.find(s.head); r && r->arity() == 0 && accepts(slot, r->result, parent))
      return LfNode::rule(*r);
    if (opts_.allow_placeholders && is_placeholder_text(s.head)) {
      auto k = s.head == "[C]" ? NodeKind::C : s.head == "[V]" ? NodeKind::V : NodeKind::I;
      if (!slot_accepts(slot, k))
        throw Error(Errc::KindMismatch, "expected " + std::string(to_string(slot)) + ", got " + s.head, path);
      return LfNode::placeholder(k);
    }
    switch (slot) {
      case NodeKind::C:
        if (s.head.empty()) throw Error(Errc::BadLeaf, "empty column name", path);
        return LfNode::column(s.head);
      case NodeKind::V:
      case NodeKind::Obj:
        if (s.head.empty()) throw Error(Errc::BadLeaf, "empty value", path);
        return LfNode::value(s.head);
      case NodeKind::I: {
        if (s.head.empty() || s.head.size() > 9 ||
            !std::all_of(s.head.begin(), s.head.end(), [](unsigned char c) { return std::isdigit(c); }))
          throw Error(Errc::KindMismatch, "expected I, got '" + s.head + "'", path);
        return LfNode::index(static_cast<std::uint32_t>(std::stoul(s.head)));
      }
      default: break;
    }
    if (const auto* r = reg_.find(s.head)) {
      if (!accepts(slot, r->result, parent))
        throw Error(Errc::KindMismatch,
                    "expected " + std::string(to_string(slot)) + ", got " + r->name + " (" +
                        std::string(to_string(r->result)) + ")",
                    path);
      throw Error(Errc::ArityMismatch, r->name + " expects " + std::to_string(r->arity()) + " arguments, got 0",
                  path);
    }
    if (s.head.empty()) throw Error(Errc::BadLeaf, "missing " + std::string(to_string(slot)), path);
    throw Error(Errc::UnknownRule, "'" + s.head + "' is not a " + std::string(to_string(slot)) + " rule", path);
  }

  NodePtr build_call(const detail::Syntax& s, NodeKind slot, const Path& path, const GrammarRule* parent) {
    const auto* r = reg_.find(s.head);
    if (!r) throw Error(Errc::UnknownRule, "'" + s.head + "'", path);
    if (!accepts(slot, r->result, parent))
      throw Error(Errc::KindMismatch,
                  "expected " + std::string(to_string(slot)) + ", got " + r->name + " (" +
                      std::string(to_string(r->result)) + ")",
                  path);
    if (s.args.size() != r->arity())
      throw Error(Errc::ArityMismatch,
                  r->name + " expects " + std::to_string(r->arity()) + " arguments, got " +
                      std::to_string(s.args.size()),
                  path);
    std::vector<NodePtr> kids;
    kids.reserve(s.args.size());
    for (std::size_t i = 0; i < s.args.size(); ++i)
      kids.push_back(build(s.args[i], r->args[i], child_path(path, i), r));
    return LfNode::rule(*r, std::move(kids));
  }

  bool accepts(NodeKind slot, NodeKind got, const GrammarRule* parent) const {
    if (slot_accepts(slot, got)) return true;
    return opts_.lenient_hop && parent && is_hop_family(*parent) && slot == NodeKind::Row &&
           got == NodeKind::View;
  }

  const GrammarRegistry& reg_;
  ParseOptions opts_;
};

// Parses a linearized tree without enforcing LogicalForm invariants beyond typing.
inline NodePtr parse_tree(std::string_view text, const GrammarRegistry& reg, ParseOptions opts = {}) {
  detail::SyntaxParser p(text);
  auto syntax = p.parse_root();
  return TreeBuilder(reg, opts).build_root(syntax);
}

inline LogicalForm parse_lf(std::string_view text, const GrammarRegistry& reg = GrammarRegistry::fixed()) {
  return LogicalForm(parse_tree(text, reg));
}

inline Sketch parse_sketch(std::string_view text, const GrammarRegistry& reg = GrammarRegistry::fixed()) {
  return Sketch(parse_tree(text, reg, ParseOptions{.allow_placeholders = true}));
}

inline std::string serialize(const LfNode& n) {
  std::string out;
  detail::serialize_into(n, out);
  return out;
}

inline std::string serialize_lf(const LogicalForm& lf) { return serialize(lf.root()); }
inline std::string serialize_sketch(const Sketch& s) { return serialize(s.root()); }

}  // namespace tlt
