#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tlt {

// Position of a node inside an LF tree: child indices from the root.
using Path = std::vector<std::size_t>;

inline std::string path_string(const Path& path) {
  if (path.empty()) return "/";
  std::string out;
  for (auto i : path) {
    out += '/';
    out += std::to_string(i);
  }
  return out;
}

inline Path child_path(const Path& parent, std::size_t index) {
  Path p = parent;
  p.push_back(index);
  return p;
}

enum class Errc {
  UnknownRule,
  ArityMismatch,
  KindMismatch,
  RootNotStat,
  UnbalancedBraces,
  UnexpectedToken,
  BadLeaf,
  InvalidPrefix,
  InvalidGrammar,
  FileNotFound,
  MalformedRecord,
  UnknownColumn,
  LegacyParseError,
  UnresolvableVariant,
  LengthMismatch,
  InvalidMatrix,
  DegenerateAgreement,
  NoCandidate,
  InvalidConfig,
};

constexpr std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::UnknownRule: return "UnknownRule";
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::KindMismatch: return "KindMismatch";
    case Errc::RootNotStat: return "RootNotStat";
    case Errc::UnbalancedBraces: return "UnbalancedBraces";
    case Errc::UnexpectedToken: return "UnexpectedToken";
    case Errc::BadLeaf: return "BadLeaf";
    case Errc::InvalidPrefix: return "InvalidPrefix";
    case Errc::InvalidGrammar: return "InvalidGrammar";
    case Errc::FileNotFound: return "FileNotFound";
    case Errc::MalformedRecord: return "MalformedRecord";
    case Errc::UnknownColumn: return "UnknownColumn";
    case Errc::LegacyParseError: return "LegacyParseError";
    case Errc::UnresolvableVariant: return "UnresolvableVariant";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::InvalidMatrix: return "InvalidMatrix";
    case Errc::DegenerateAgreement: return "DegenerateAgreement";
    case Errc::NoCandidate: return "NoCandidate";
    case Errc::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

// Library-wide exception. The code identifies the failure class; the path, when
// non-empty, points at the offending LF node.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, Path path = {})
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message),
        path_(std::move(path)) {}

  Errc code() const noexcept { return code_; }
  // Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }
  const Path& path() const noexcept { return path_; }

 private:
  Errc code_;
  std::string detail_;
  Path path_;
};

namespace text {

inline bool is_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

// Trims and collapses internal whitespace runs to one space.
inline std::string normalize_ws(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

inline std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

// Comparison key used for every case-insensitive string test in the library.
inline std::string fold(std::string_view s) { return to_lower(normalize_ws(s)); }

inline bool iequals(std::string_view a, std::string_view b) { return fold(a) == fold(b); }

inline bool icontains(std::string_view haystack, std::string_view needle) {
  return fold(haystack).find(fold(needle)) != std::string::npos;
}

}  // namespace text
}  // namespace tlt
