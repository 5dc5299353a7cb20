#pragma once

#include <algorithm>
#include <fstream>
#include <iostream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tlt/tlt.hpp"

namespace tlt::cli {

// Exit statuses.
inline constexpr int kOk = 0;
inline constexpr int kDomainError = 1;
inline constexpr int kUsageError = 2;

struct Options {
  std::string config_file;
  bool print_config = false;
  double tolerance = 0;
  std::uint64_t seed = 0;
  std::string out;

  std::string lf;
  std::string table;
  std::size_t record = 0;
  std::vector<std::string> datasets;
  bool legacy = false;
  bool trace = false;
  std::string report;

  std::uint32_t beam_size = 0;
  std::uint32_t max_depth = 0;
  bool no_fcr = false;
  bool require_cs = false;
  std::vector<std::string> cs;
  std::vector<std::string> values;
  std::size_t top_k = 10;

  std::string predictions;
  std::size_t sample = 0;
  bool ablation = false;
  bool any_in_beam = false;

  std::string matrix;
  bool drop_disagreement = false;
};

namespace detail {

struct Io {
  std::ostream& out;
  std::ostream& err;
};

struct Configs {
  ExecConfig exec;
  SearchConfig search;
};

inline Configs effective_config(const Options& o, const CLI::App& app) {
  Configs c;
  if (!o.config_file.empty()) {
    auto j = read_json_file(o.config_file);
    if (!j.is_object()) throw Error(Errc::InvalidConfig, o.config_file + ": expected an object");
    for (const auto& [k, v] : j.items()) {
      if (k == "exec") apply_json(c.exec, v);
      else if (k == "search") apply_json(c.search, v);
      else throw Error(Errc::InvalidConfig, "unknown config section " + k);
    }
  }
  auto given = [&](const char* name) {
    for (const auto* sub : app.get_subcommands())
      if (const auto* opt = sub->get_option_no_throw(name); opt && opt->count() > 0) return true;
    const auto* opt = app.get_option_no_throw(name);
    return opt && opt->count() > 0;
  };
  if (given("--tolerance")) c.exec.round_eq_tolerance = o.tolerance;
  if (given("--beam-size")) c.search.beam_size = o.beam_size;
  if (given("--max-depth")) c.search.max_sketch_depth = o.max_depth;
  if (given("--no-fcr")) c.search.use_fcr = false;
  if (given("--require-cs")) c.search.require_cs_values = true;
  c.search.exec = c.exec;
  c.exec.check();
  c.search.check();
  return c;
}

inline std::vector<DatasetRecord> load_all(const std::vector<std::string>& files) {
  std::vector<DatasetRecord> out;
  for (const auto& f : files) {
    auto name = std::filesystem::path(f).filename().string();
    Split split = name.find("valid") != std::string::npos || name.find("dev") != std::string::npos ? Split::dev
                  : name.find("test") != std::string::npos                                         ? Split::test
                                                                                                    : Split::train;
    auto recs = load_dataset(f, split);
    out.insert(out.end(), std::make_move_iterator(recs.begin()), std::make_move_iterator(recs.end()));
  }
  return out;
}

inline void write_out(const Options& o, const Io& io, const std::string& text) {
  if (o.out.empty()) {
    io.out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw Error(Errc::FileNotFound, "cannot write " + o.out);
  f << text;
}

inline LogicalForm parse_input_lf(const Options& o, const Table* table) {
  if (o.lf.empty()) throw Error(Errc::BadLeaf, "--lf is empty");
  if (o.legacy) {
    if (!table) throw Error(Errc::InvalidConfig, "--legacy needs --table to resolve variants");
    return convert_legacy(o.lf, *table).lf;
  }
  return parse_lf(strip_true_marker(o.lf));
}

inline std::vector<CsValue> explicit_values(const std::vector<std::string>& specs) {
  std::vector<CsValue> out;
  for (const auto& s : specs) {
    CsValue v{s, CsCategory::TAB, {}};
    auto colon = s.rfind(':');
    if (colon != std::string::npos) {
      if (auto c = cs_category_from_string(s.substr(colon + 1))) {
        v.text = s.substr(0, colon);
        v.category = *c;
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

inline std::set<CsCategory> categories(const std::vector<std::string>& names) {
  std::set<CsCategory> out;
  for (const auto& n : names) {
    auto c = cs_category_from_string(n);
    if (!c) throw CLI::ValidationError("--cs", "unknown category " + n);
    out.insert(*c);
  }
  return out;
}

inline int cmd_parse(const Options& o, const Io& io) {
  auto tree = parse_tree(strip_true_marker(o.lf), o.legacy ? GrammarRegistry::legacy() : GrammarRegistry::fixed(),
                         ParseOptions{.allow_placeholders = false, .lenient_hop = o.legacy});
  LogicalForm lf(tree);
  json j{{"lf", serialize_lf(lf)}, {"sketch", serialize_sketch(extract_sketch(lf))}, {"height", lf.root().height()}};
  write_out(o, io, j.dump() + "\n");
  return kOk;
}

inline int cmd_check(const Options& o, const Io& io, const Configs& c) {
  auto table = load_table_file(o.table, o.record);
  auto lf = parse_input_lf(o, &table);
  auto violations = validate(lf, table, c.exec.max_index);
  json vs = json::array();
  for (const auto& v : violations) {
    vs.push_back({{"kind", to_string(v.kind)}, {"path", path_string(v.path)}, {"message", v.message}});
    io.err << to_string(v.kind) << " at " << path_string(v.path) << ": " << v.message << "\n";
  }
  write_out(o, io, json{{"valid", violations.empty()}, {"violations", vs}}.dump() + "\n");
  return violations.empty() ? kOk : kDomainError;
}

inline int cmd_execute(const Options& o, const Io& io, const Configs& c) {
  auto table = load_table_file(o.table, o.record);
  auto lf = parse_input_lf(o, &table);
  auto res = execute(lf, table, c.exec);
  if (res.error)
    io.err << to_string(res.error->kind) << " at " << path_string(res.error->path) << ": " << res.error->message
           << "\n";
  if (o.trace) write_out(o, io, to_json(res, true).dump() + "\n");
  else if (res.ok()) write_out(o, io, std::string(*res.root_truth ? "true" : "false") + "\n");
  return res.ok() ? kOk : kDomainError;
}

inline int cmd_convert(const Options& o, const Io& io) {
  if (!o.lf.empty()) {
    auto table = load_table_file(o.table, o.record);
    auto conv = convert_legacy(o.lf, table);
    for (const auto& w : conv.report.warnings) io.err << "warning: " << w.message << "\n";
    write_out(o, io, json{{"lf", serialize_lf(conv.lf)}, {"report", to_json(conv.report)}}.dump() + "\n");
    return kOk;
  }
  if (o.datasets.size() != 1) throw CLI::ValidationError("convert", "needs one --dataset (or --lf with --table)");
  if (o.out.empty()) throw CLI::ValidationError("convert", "--out is required for a dataset");
  auto doc = read_json_file(o.datasets.front());
  if (!doc.is_array()) throw Error(Errc::MalformedRecord, "top level is not a list");
  auto recs = load_all(o.datasets);
  json converted = json::array(), reports = json::array();
  std::size_t rewritten = 0, hop_first = 0, failed = 0;
  for (const auto& rec : recs) {
    json r{{"id", rec.id()}};
    auto out = record_to_json(rec);
    try {
      auto conv = convert_legacy(rec.logic_str, rec.table);
      auto text = serialize_lf(conv.lf);
      out["logic_str"] = rec.had_true_marker ? text + " = true" : text;
      r["report"] = to_json(conv.report);
      rewritten += !conv.report.unchanged();
      hop_first += conv.report.has_hop_first();
      for (const auto& w : conv.report.warnings) io.err << rec.id() << ": warning: " << w.message << "\n";
    } catch (const Error& e) {
      ++failed;
      r["error"] = e.what();
      io.err << rec.id() << ": " << e.what() << "\n";
    }
    converted.push_back(std::move(out));
    reports.push_back(std::move(r));
  }
  write_json_file(o.out, converted);
  if (!o.report.empty()) write_json_file(o.report, reports);
  json summary{{"records", recs.size()}, {"rewritten", rewritten}, {"hop_first", hop_first}, {"failed", failed}};
  io.out << summary.dump() << "\n";
  return failed == 0 ? kOk : kDomainError;
}

inline int cmd_extract_cs(const Options& o, const Io& io, const Configs& c) {
  std::ostringstream lines;
  std::vector<std::string> warnings;
  if (!o.lf.empty()) {
    auto table = load_table_file(o.table, o.record);
    auto lf = parse_input_lf(o, &table);
    json vals = json::array();
    for (const auto& v : extract_cs(lf, table, c.exec, &warnings)) vals.push_back(to_json(v));
    lines << json{{"values", vals}}.dump() << "\n";
  } else {
    if (o.datasets.empty()) throw CLI::ValidationError("extract-cs", "needs --dataset or --lf with --table");
    for (const auto& rec : load_all(o.datasets)) {
      json j{{"id", rec.id()}};
      try {
        auto conv = convert_legacy(rec.logic_str, rec.table);
        json vals = json::array();
        std::vector<std::string> distinct;
        for (const auto& v : extract_cs(conv.lf, rec.table, c.exec, &warnings)) {
          vals.push_back(to_json(v));
          if (std::find(distinct.begin(), distinct.end(), v.text) == distinct.end()) distinct.push_back(v.text);
        }
        j["values"] = vals;
        j["content_selection"] = distinct;
      } catch (const Error& e) {
        j["error"] = e.what();
        io.err << rec.id() << ": " << e.what() << "\n";
      }
      lines << j.dump() << "\n";
    }
  }
  for (const auto& w : warnings) io.err << "warning: " << w << "\n";
  write_out(o, io, lines.str());
  return kOk;
}

inline int cmd_stats(const Options& o, const Io& io, const Configs& c) {
  if (o.datasets.empty()) throw CLI::ValidationError("stats", "needs --dataset");
  auto recs = load_all(o.datasets);
  std::vector<std::string> warnings;
  auto d = cs_distribution(recs, c.exec, &warnings);
  std::size_t hop_first = 0, converted = 0;
  for (const auto& rec : recs) {
    try {
      auto conv = convert_legacy(rec.logic_str, rec.table);
      ++converted;
      hop_first += conv.report.has_hop_first();
    } catch (const Error&) {
    }
  }
  json j = to_json(d);
  j["hop_first_rate"] = converted ? static_cast<double>(hop_first) / static_cast<double>(converted) : 0.0;
  for (const auto& w : warnings) io.err << "warning: " << w << "\n";
  write_out(o, io, j.dump() + "\n");
  return kOk;
}

inline int cmd_generate(const Options& o, const Io& io, const Configs& c, const CLI::App& sub) {
  Table table;
  std::vector<CsValue> cs = explicit_values(o.values);
  if (!o.datasets.empty()) {
    auto recs = load_all(o.datasets);
    if (o.record >= recs.size()) throw Error(Errc::MalformedRecord, "record " + std::to_string(o.record) + " out of range");
    const auto& rec = recs[o.record];
    table = rec.table;
    if (sub.get_option("--cs")->count() > 0) {
      auto cats = categories(o.cs);
      auto conv = convert_legacy(rec.logic_str, rec.table);
      for (const auto& v : extract_cs(conv.lf, rec.table, c.exec))
        if (cats.count(v.category)) cs.push_back(v);
    }
  } else {
    if (o.table.empty()) throw CLI::ValidationError("generate", "needs --table or --dataset");
    table = load_table_file(o.table, o.record);
    if (sub.get_option("--cs")->count() > 0) {
      auto cats = categories(o.cs);
      std::erase_if(cs, [&](const CsValue& v) { return !cats.count(v.category); });
    }
  }
  SearchStats st;
  auto cands = generate(table, cs, c.search, GrammarRegistry::fixed(), &st);
  json arr = json::array();
  for (std::size_t i = 0; i < cands.size() && i < o.top_k; ++i) arr.push_back(to_json(cands[i]));
  json j{{"candidates", arr},
         {"total", cands.size()},
         {"stats", {{"sketches", st.sketches}, {"fills", st.fills}, {"rejected", st.rejected}}}};
  write_out(o, io, j.dump() + "\n");
  return kOk;
}

inline std::vector<std::string> read_lines(const std::string& path) {
  auto content = read_file(path);
  std::vector<std::string> lines;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  while (!lines.empty() && text::normalize_ws(lines.back()).empty()) lines.pop_back();
  return lines;
}

inline int cmd_evaluate(const Options& o, const Io& io, const Configs& c, const CLI::App& sub) {
  if (o.datasets.empty()) throw CLI::ValidationError("evaluate", "needs --dataset");
  auto recs = load_all(o.datasets);
  if (o.sample > 0 && o.sample < recs.size()) {
    std::mt19937_64 rng(o.seed);
    std::vector<std::size_t> idx(recs.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(o.sample);
    std::sort(idx.begin(), idx.end());
    std::vector<DatasetRecord> picked;
    for (auto i : idx) picked.push_back(recs[i]);
    recs = std::move(picked);
  }

  if (o.ablation) {
    std::vector<std::set<CsCategory>> subsets;
    if (sub.get_option("--cs")->count() > 0) subsets.push_back(categories(o.cs));
    else
      subsets = {{}, {CsCategory::TAB}, {CsCategory::TAB, CsCategory::INF},
                 {CsCategory::TAB, CsCategory::INF, CsCategory::AUX}};
    auto grid = ablation_table(recs, subsets, {false, true}, c.search, o.any_in_beam);
    json rows = json::array();
    for (const auto& cell : grid)
      rows.push_back({{"cs", subset_label(cell.subset)},
                      {"fcr", cell.fcr},
                      {"sketch_accuracy", cell.report.sketch_accuracy},
                      {"full_accuracy", cell.report.full_accuracy},
                      {"n", cell.report.n},
                      {"no_candidate", cell.no_candidate},
                      {"errors", cell.errors}});
    write_out(o, io, json{{"grid", rows}}.dump() + "\n");
    return kOk;
  }

  if (o.predictions.empty()) throw CLI::ValidationError("evaluate", "needs --predictions (or --ablation)");
  auto lines = read_lines(o.predictions);
  if (lines.size() != recs.size())
    throw Error(Errc::LengthMismatch,
                std::to_string(lines.size()) + " predictions for " + std::to_string(recs.size()) + " records");
  std::vector<std::optional<LogicalForm>> preds;
  std::vector<std::vector<LogicalForm>> refs;
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    ids.push_back(recs[i].id());
    try {
      preds.emplace_back(parse_lf(strip_true_marker(lines[i])));
    } catch (const Error& e) {
      io.err << recs[i].id() << ": prediction: " << e.what() << "\n";
      preds.emplace_back(std::nullopt);
    }
    try {
      refs.push_back({convert_legacy(recs[i].logic_str, recs[i].table).lf});
    } catch (const Error& e) {
      io.err << recs[i].id() << ": reference: " << e.what() << "\n";
      refs.emplace_back();
    }
  }
  write_out(o, io, to_json(score_accuracy(preds, refs, ids)).dump() + "\n");
  return kOk;
}

inline RatingMatrix read_matrix(const std::string& path, bool drop) {
  std::vector<std::vector<std::uint32_t>> rows;
  std::size_t lineno = 0;
  for (const auto& line : read_lines(path)) {
    ++lineno;
    auto trimmed = text::normalize_ws(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    std::vector<std::uint32_t> row;
    std::istringstream in(trimmed);
    std::string cell;
    bool numeric = true;
    while (std::getline(in, cell, ',')) {
      auto t = text::normalize_ws(cell);
      if (t.empty() || !std::all_of(t.begin(), t.end(), [](unsigned char ch) { return std::isdigit(ch); })) {
        numeric = false;
        break;
      }
      row.push_back(static_cast<std::uint32_t>(std::stoul(t)));
    }
    if (!numeric) {
      if (rows.empty()) continue;  // header
      throw Error(Errc::InvalidMatrix, path + ":" + std::to_string(lineno) + ": non-numeric count");
    }
    rows.push_back(std::move(row));
  }
  return RatingMatrix::from_counts(std::move(rows), drop);
}

inline int cmd_kappa(const Options& o, const Io& io) {
  auto m = read_matrix(o.matrix, o.drop_disagreement);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", fleiss_kappa(m));
  write_out(o, io, std::string(buf) + "\n");
  return kOk;
}

}  // namespace detail

// Runs one invocation. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Table-to-logic toolkit: logical forms over tables", "tlt"};
  app.fallthrough();
  app.require_subcommand(1, 1);
  app.add_option("--config", o.config_file, "JSON config with \"exec\" and \"search\" sections");
  app.add_flag("--print-config", o.print_config, "Print the effective configuration and exit");
  app.add_option("--tolerance", o.tolerance, "round_eq relative tolerance");
  app.add_option("--seed", o.seed, "Seed for record sampling");
  app.add_option("--out", o.out, "Write the primary output here instead of stdout");

  auto lf_opt = [&](CLI::App* s, bool required) {
    auto* opt = s->add_option("--lf", o.lf, "Linearized logical form");
    if (required) opt->required();
    s->add_flag("--legacy", o.legacy, "Read the LF in the source grammar");
  };
  auto table_opt = [&](CLI::App* s, bool required) {
    auto* opt = s->add_option("--table", o.table, "Table file (minimal or dataset record JSON)");
    if (required) opt->required();
    s->add_option("--record", o.record, "Record index inside a dataset file");
  };
  auto search_opts = [&](CLI::App* s) {
    s->add_option("--beam-size", o.beam_size, "Beam size");
    s->add_option("--max-depth", o.max_depth, "Maximum sketch depth");
    s->add_flag("--no-fcr", o.no_fcr, "Disable False Candidate Rejection");
    s->add_flag("--require-cs", o.require_cs, "Fill V leaves only with CS values, covering every TAB value");
    s->add_option("--cs", o.cs, "CS categories to use (tab, inf, aux)");
  };

  auto* parse = app.add_subcommand("parse", "Parse and canonicalize an LF");
  lf_opt(parse, true);

  auto* check = app.add_subcommand("check", "Validate an LF against a table");
  lf_opt(check, true);
  table_opt(check, true);

  auto* exec = app.add_subcommand("execute", "Execute an LF over a table");
  lf_opt(exec, true);
  table_opt(exec, true);
  exec->add_flag("--trace", o.trace, "Print every node value as JSON");

  auto* convert = app.add_subcommand("convert", "Convert source-grammar LFs to the fixed grammar");
  convert->add_option("--dataset", o.datasets, "Dataset file");
  convert->add_option("--lf", o.lf, "Single source-grammar LF");
  table_opt(convert, false);
  convert->add_option("--report", o.report, "Per-record conversion report (JSON)");

  auto* xcs = app.add_subcommand("extract-cs", "Content-selection values of gold LFs");
  xcs->add_option("--dataset", o.datasets, "Dataset file(s)");
  lf_opt(xcs, false);
  table_opt(xcs, false);

  auto* stats = app.add_subcommand("stats", "CS category distribution over datasets");
  stats->add_option("--dataset", o.datasets, "Dataset file(s)")->required();

  auto* gen = app.add_subcommand("generate", "Search candidate LFs for a table");
  table_opt(gen, false);
  gen->add_option("--dataset", o.datasets, "Dataset file; --record picks the table and gold CS");
  gen->add_option("--value", o.values, "CS value, optionally suffixed :tab, :inf or :aux");
  gen->add_option("--top-k", o.top_k, "Number of candidates printed");
  search_opts(gen);

  auto* eval = app.add_subcommand("evaluate", "Score predictions against gold LFs");
  eval->add_option("--dataset", o.datasets, "Dataset file(s)")->required();
  eval->add_option("--predictions", o.predictions, "One linearized LF per line, aligned with records");
  eval->add_option("--sample", o.sample, "Use a seeded sample of this many records");
  eval->add_flag("--ablation", o.ablation, "Run the CS ablation grid instead of scoring predictions");
  eval->add_flag("--any-in-beam", o.any_in_beam, "Count a hit when any candidate matches");
  search_opts(eval);

  auto* kappa = app.add_subcommand("kappa", "Fleiss' kappa of a CSV count matrix");
  kappa->add_option("--matrix", o.matrix, "CSV: one row per item, one count per category")->required();
  kappa->add_flag("--drop-disagreement", o.drop_disagreement, "Discard items where raters disagreed");

  detail::Io io{out, err};
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    auto cfg = detail::effective_config(o, app);
    if (o.print_config) {
      out << json{{"exec", to_json(cfg.exec)}, {"search", to_json(cfg.search)}}.dump(1) << "\n";
      return kOk;
    }
    if (*parse) return detail::cmd_parse(o, io);
    if (*check) return detail::cmd_check(o, io, cfg);
    if (*exec) return detail::cmd_execute(o, io, cfg);
    if (*convert) return detail::cmd_convert(o, io);
    if (*xcs) return detail::cmd_extract_cs(o, io, cfg);
    if (*stats) return detail::cmd_stats(o, io, cfg);
    if (*gen) return detail::cmd_generate(o, io, cfg, *gen);
    if (*eval) return detail::cmd_evaluate(o, io, cfg, *eval);
    if (*kappa) return detail::cmd_kappa(o, io);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    err << e.what();
    if (!e.path().empty()) err << " at " << path_string(e.path());
    err << "\n";
    return e.code() == Errc::InvalidConfig ? kUsageError : kDomainError;
  }
  return kUsageError;
}

}  // namespace tlt::cli
