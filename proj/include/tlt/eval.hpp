#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tlt/cs.hpp"
#include "tlt/dataset.hpp"
#include "tlt/exec.hpp"
#include "tlt/legacy.hpp"
#include "tlt/search.hpp"
#include "tlt/sketch.hpp"

namespace tlt {

// ---------------------------------------------------------------------------
// Sketch and full accuracy

struct RecordScore {
  std::string id;
  bool sketch_hit = false;
  bool full_hit = false;
};

struct AccuracyReport {
  double sketch_accuracy = 0;
  double full_accuracy = 0;
  std::size_t n = 0;
  std::vector<RecordScore> per_record;
};

inline bool sketch_matches(const LogicalForm& pred, const std::vector<LogicalForm>& refs) {
  auto ps = extract_sketch(pred);
  for (const auto& r : refs)
    if (extract_sketch(r) == ps) return true;
  return false;
}

inline bool full_matches(const LogicalForm& pred, const std::vector<LogicalForm>& refs) {
  for (const auto& r : refs)
    if (r == pred) return true;
  return false;
}

// Strict structural equality against any reference. A missing prediction
// counts as a miss. `ids` may be empty, in which case positions are used.
inline AccuracyReport score_accuracy(const std::vector<std::optional<LogicalForm>>& predictions,
                                     const std::vector<std::vector<LogicalForm>>& references,
                                     const std::vector<std::string>& ids = {}) {
  if (predictions.size() != references.size())
    throw Error(Errc::LengthMismatch, std::to_string(predictions.size()) + " predictions for " +
                                          std::to_string(references.size()) + " references");
  if (!ids.empty() && ids.size() != predictions.size())
    throw Error(Errc::LengthMismatch, "ids do not align with predictions");
  AccuracyReport rep;
  rep.n = predictions.size();
  std::size_t sk = 0, full = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    RecordScore s{ids.empty() ? std::to_string(i) : ids[i], false, false};
    if (predictions[i]) {
      s.sketch_hit = sketch_matches(*predictions[i], references[i]);
      s.full_hit = s.sketch_hit && full_matches(*predictions[i], references[i]);
    }
    sk += s.sketch_hit;
    full += s.full_hit;
    rep.per_record.push_back(std::move(s));
  }
  if (rep.n > 0) {
    rep.sketch_accuracy = static_cast<double>(sk) / static_cast<double>(rep.n);
    rep.full_accuracy = static_cast<double>(full) / static_cast<double>(rep.n);
  }
  return rep;
}

inline AccuracyReport score_accuracy(const std::vector<LogicalForm>& predictions,
                                     const std::vector<std::vector<LogicalForm>>& references,
                                     const std::vector<std::string>& ids = {}) {
  std::vector<std::optional<LogicalForm>> p(predictions.begin(), predictions.end());
  return score_accuracy(p, references, ids);
}

// ---------------------------------------------------------------------------
// Execution rate

struct ExecItem {
  std::string id;
  LogicalForm lf;
  std::reference_wrapper<const Table> table;
};

struct ExecFailureLog {
  std::string id;
  Path path;
  std::string kind;  // error kind, or "False" when the LF ran but did not hold
  std::string message;
};

struct ExecutionReport {
  std::optional<double> rate;  // undefined for an empty input
  std::size_t n = 0;
  std::size_t n_true = 0;
  std::vector<ExecFailureLog> failures;
};

inline ExecutionReport execution_rate(const std::vector<ExecItem>& items, const ExecConfig& cfg = {}) {
  ExecutionReport rep;
  rep.n = items.size();
  for (const auto& it : items) {
    auto out = execute(it.lf, it.table.get(), cfg);
    if (out.ok() && *out.root_truth) {
      ++rep.n_true;
      continue;
    }
    if (out.error)
      rep.failures.push_back({it.id, out.error->path, std::string(to_string(out.error->kind)), out.error->message});
    else
      rep.failures.push_back({it.id, {}, "False", "root executed to false"});
  }
  if (rep.n > 0) rep.rate = static_cast<double>(rep.n_true) / static_cast<double>(rep.n);
  return rep;
}

// ---------------------------------------------------------------------------
// Fleiss' kappa

// items x categories counts; every item is rated by the same number of raters.
class RatingMatrix {
 public:
  // With drop_disagreement, items whose raters did not all agree are removed
  // before validation.
  static RatingMatrix from_counts(std::vector<std::vector<std::uint32_t>> counts, bool drop_disagreement = false) {
    if (drop_disagreement) {
      std::erase_if(counts, [](const std::vector<std::uint32_t>& row) {
        return std::count_if(row.begin(), row.end(), [](std::uint32_t c) { return c > 0; }) > 1;
      });
    }
    if (counts.empty()) throw Error(Errc::InvalidMatrix, "no items");
    std::size_t k = counts.front().size();
    if (k < 2) throw Error(Errc::InvalidMatrix, "need at least 2 categories");
    std::uint64_t n = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (counts[i].size() != k)
        throw Error(Errc::InvalidMatrix, "item " + std::to_string(i) + " has " + std::to_string(counts[i].size()) +
                                             " categories, expected " + std::to_string(k));
      std::uint64_t s = 0;
      for (auto c : counts[i]) s += c;
      if (i == 0) n = s;
      if (s != n)
        throw Error(Errc::InvalidMatrix, "item " + std::to_string(i) + " has " + std::to_string(s) +
                                             " ratings, expected " + std::to_string(n));
    }
    if (n < 2) throw Error(Errc::InvalidMatrix, "need at least 2 raters per item");
    RatingMatrix m;
    m.counts_ = std::move(counts);
    m.raters_ = static_cast<std::uint32_t>(n);
    return m;
  }

  // labels[i] holds one category index per rater for item i.
  static RatingMatrix from_labels(const std::vector<std::vector<std::size_t>>& labels, std::size_t categories,
                                  bool drop_disagreement = false) {
    std::vector<std::vector<std::uint32_t>> counts;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      std::vector<std::uint32_t> row(categories, 0);
      for (auto l : labels[i]) {
        if (l >= categories)
          throw Error(Errc::InvalidMatrix, "item " + std::to_string(i) + ": label " + std::to_string(l) +
                                               " outside " + std::to_string(categories) + " categories");
        ++row[l];
      }
      counts.push_back(std::move(row));
    }
    return from_counts(std::move(counts), drop_disagreement);
  }

  std::size_t items() const { return counts_.size(); }
  std::size_t categories() const { return counts_.front().size(); }
  std::uint32_t raters() const { return raters_; }
  const std::vector<std::vector<std::uint32_t>>& counts() const { return counts_; }

 private:
  RatingMatrix() = default;
  std::vector<std::vector<std::uint32_t>> counts_;
  std::uint32_t raters_ = 0;
};

inline double fleiss_kappa(const RatingMatrix& m) {
  const double n = m.raters();
  const double items = static_cast<double>(m.items());
  std::vector<double> p(m.categories(), 0.0);
  double p_bar = 0;
  for (const auto& row : m.counts()) {
    double sq = 0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      sq += static_cast<double>(row[j]) * row[j];
      p[j] += row[j];
    }
    p_bar += (sq - n) / (n * (n - 1));
  }
  p_bar /= items;
  double pe = 0;
  for (double pj : p) {
    double frac = pj / (items * n);
    pe += frac * frac;
  }
  if (pe >= 1.0 - 1e-12)
    throw Error(Errc::DegenerateAgreement, "every rating falls in one category; kappa is undefined");
  return (p_bar - pe) / (1 - pe);
}

// ---------------------------------------------------------------------------
// Content-selection ablation grid

struct AblationCell {
  std::set<CsCategory> subset;  // empty: no content selection
  bool fcr = true;
  AccuracyReport report;
  std::size_t no_candidate = 0;  // records where the search produced nothing
  std::size_t errors = 0;        // records whose gold LF did not convert
};

inline std::string subset_label(const std::set<CsCategory>& subset) {
  if (subset.empty()) return "noCS";
  std::string out;
  for (auto c : subset) {
    if (!out.empty()) out += ",";
    out += to_string(c);
  }
  return out;
}

// Runs the search for every record under every (subset, fcr) configuration,
// feeding only the CS values of the selected categories. With any_in_beam a
// record counts as a hit when any returned candidate matches; otherwise only
// the top candidate is scored. Per-record failures never abort the grid.
inline std::vector<AblationCell> ablation_table(const std::vector<DatasetRecord>& records,
                                                const std::vector<std::set<CsCategory>>& cs_subsets,
                                                const std::vector<bool>& fcr_flags, const SearchConfig& base,
                                                bool any_in_beam = false) {
  struct Prepared {
    std::optional<LogicalForm> gold;
    std::vector<CsValue> cs;
  };
  std::vector<Prepared> prep;
  prep.reserve(records.size());
  for (const auto& rec : records) {
    Prepared p;
    try {
      auto conv = convert_legacy(rec.logic_str, rec.table);
      p.cs = extract_cs(conv.lf, rec.table, base.exec);
      p.gold = std::move(conv.lf);
    } catch (const Error&) {
    }
    prep.push_back(std::move(p));
  }

  std::vector<AblationCell> grid;
  for (const auto& subset : cs_subsets) {
    for (bool fcr : fcr_flags) {
      AblationCell cell{subset, fcr, {}, 0, 0};
      SearchConfig cfg = base;
      cfg.use_fcr = fcr;
      std::size_t sk = 0, full = 0;
      for (std::size_t i = 0; i < records.size(); ++i) {
        RecordScore s{records[i].id(), false, false};
        if (!prep[i].gold) {
          ++cell.errors;
          cell.report.per_record.push_back(std::move(s));
          continue;
        }
        std::vector<CsValue> cs;
        for (const auto& v : prep[i].cs)
          if (subset.count(v.category)) cs.push_back(v);
        std::vector<LogicalForm> refs{*prep[i].gold};
        try {
          auto cands = generate(records[i].table, cs, cfg);
          std::size_t upto = any_in_beam ? cands.size() : 1;
          for (std::size_t c = 0; c < upto && !(s.sketch_hit && s.full_hit); ++c) {
            bool sh = sketch_matches(cands[c].lf, refs);
            s.sketch_hit = s.sketch_hit || sh;
            s.full_hit = s.full_hit || (sh && full_matches(cands[c].lf, refs));
          }
        } catch (const Error& e) {
          if (e.code() == Errc::NoCandidate) ++cell.no_candidate;
          else ++cell.errors;
        }
        sk += s.sketch_hit;
        full += s.full_hit;
        cell.report.per_record.push_back(std::move(s));
      }
      cell.report.n = records.size();
      if (cell.report.n > 0) {
        cell.report.sketch_accuracy = static_cast<double>(sk) / static_cast<double>(cell.report.n);
        cell.report.full_accuracy = static_cast<double>(full) / static_cast<double>(cell.report.n);
      }
      grid.push_back(std::move(cell));
    }
  }
  return grid;
}

}  // namespace tlt
