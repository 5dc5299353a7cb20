#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tlt/lf.hpp"
#include "tlt/table.hpp"

namespace tlt {

inline constexpr std::uint32_t kDefaultMaxIndex = 20;

struct Violation {
  enum class Kind { UnknownColumn, IndexOutOfRange, ArityMismatch, KindMismatch, RootNotStat, BadLeaf };
  Kind kind;
  Path path;
  std::string message;
};

constexpr std::string_view to_string(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::UnknownColumn: return "UnknownColumn";
    case Violation::Kind::IndexOutOfRange: return "IndexOutOfRange";
    case Violation::Kind::ArityMismatch: return "ArityMismatch";
    case Violation::Kind::KindMismatch: return "KindMismatch";
    case Violation::Kind::RootNotStat: return "RootNotStat";
    case Violation::Kind::BadLeaf: return "BadLeaf";
  }
  return "?";
}

// Every problem that would stop `root` from executing against `table`.
// Ordinals are 1-based and bounded by `max_index`.
inline std::vector<Violation> validate(const LfNode& root, const Table& table,
                                       std::uint32_t max_index = kDefaultMaxIndex) {
  std::vector<Violation> out;
  for (auto& issue : structural_issues(root, false)) {
    auto kind = issue.code == Errc::RootNotStat     ? Violation::Kind::RootNotStat
                : issue.code == Errc::ArityMismatch ? Violation::Kind::ArityMismatch
                : issue.code == Errc::KindMismatch  ? Violation::Kind::KindMismatch
                                                    : Violation::Kind::BadLeaf;
    out.push_back({kind, std::move(issue.path), std::move(issue.message)});
  }
  walk(root, [&](const LfNode& n, const Path& p) {
    if (n.type() == LfNode::Type::Column && !table.column_index(n.text()))
      out.push_back({Violation::Kind::UnknownColumn, p, "no column '" + n.text() + "'"});
    if (n.type() == LfNode::Type::Index && (n.ordinal() < 1 || n.ordinal() > max_index))
      out.push_back({Violation::Kind::IndexOutOfRange, p,
                     "ordinal " + std::to_string(n.ordinal()) + " outside 1.." + std::to_string(max_index)});
  });
  return out;
}

inline std::vector<Violation> validate(const LogicalForm& lf, const Table& table,
                                       std::uint32_t max_index = kDefaultMaxIndex) {
  return validate(lf.root(), table, max_index);
}

}  // namespace tlt
