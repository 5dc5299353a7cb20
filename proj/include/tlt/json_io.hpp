#pragma once

#include <nlohmann/json.hpp>

#include "tlt/cs.hpp"
#include "tlt/eval.hpp"
#include "tlt/exec.hpp"
#include "tlt/legacy.hpp"
#include "tlt/search.hpp"

namespace tlt {

inline json to_json_value(const TypedValue& v) {
  if (v.is_bool()) return v.as_bool();
  if (v.is_num()) return v.as_num();
  if (v.is_text()) return v.as_text();
  if (v.is_date()) return json{{"date", format_date(v.as_date())}};
  if (v.is_row()) return json{{"row", v.as_row()}};
  return json{{"view", v.as_view()}};
}

inline json to_json(const ExecError& e) {
  return json{{"kind", to_string(e.kind)}, {"path", path_string(e.path)}, {"message", e.message}};
}

inline json to_json(const ExecOutcome& out, bool trace) {
  json j;
  if (out.root_truth) j["result"] = *out.root_truth;
  else j["result"] = nullptr;
  if (out.error) j["error"] = to_json(*out.error);
  if (trace) {
    json t = json::object();
    for (const auto& [p, v] : out.node_values) t[path_string(p)] = to_json_value(v);
    j["trace"] = std::move(t);
  }
  return j;
}

inline json to_json(const ConversionReport& r) {
  json rw = json::array();
  for (const auto& w : r.rewrites)
    rw.push_back({{"path", path_string(w.path)}, {"old", w.old_rule}, {"new", w.new_rule}, {"reason", to_string(w.reason)}});
  json warn = json::array();
  for (const auto& w : r.warnings)
    warn.push_back({{"code", to_string(w.code)}, {"path", path_string(w.path)}, {"message", w.message}});
  return json{{"rewrites", rw}, {"warnings", warn}, {"unchanged", r.unchanged()}};
}

inline json to_json(const CsValue& v) {
  return json{{"text", v.text}, {"category", to_string(v.category)}, {"path", path_string(v.source_path)}};
}

inline json to_json(const CsDistribution& d) {
  return json{{"tab", d.tab},
              {"inf", d.inf},
              {"aux", d.aux},
              {"unique", {{"tab", d.unique_tab}, {"inf", d.unique_inf}, {"aux", d.unique_aux}}},
              {"values", d.values},
              {"unique_values", d.unique_values},
              {"records", d.records},
              {"records_skipped", d.records_skipped},
              {"empty", d.empty}};
}

inline json to_json(const Candidate& c) {
  return json{{"lf", c.text}, {"score", c.score}, {"executes_true", c.executes_true}, {"uses_cs", c.uses_cs}};
}

inline json to_json(const AccuracyReport& r) {
  json per = json::array();
  for (const auto& s : r.per_record) per.push_back({{"id", s.id}, {"sketch_hit", s.sketch_hit}, {"full_hit", s.full_hit}});
  return json{{"sketch_accuracy", r.sketch_accuracy}, {"full_accuracy", r.full_accuracy}, {"n", r.n}, {"per_record", per}};
}

inline json to_json(const ExecConfig& c) {
  return json{{"round_eq_tolerance", c.round_eq_tolerance},
              {"most_threshold", c.most_threshold},
              {"empty_view_policy", c.empty_view_policy == EmptyViewPolicy::error ? "error" : "false_propagate"},
              {"max_index", c.max_index},
              {"semantics", c.semantics == Semantics::fixed ? "fixed" : "legacy"}};
}

inline json to_json(const SearchConfig& c) {
  return json{{"beam_size", c.beam_size},
              {"max_steps", c.max_steps},
              {"max_sketch_depth", c.max_sketch_depth},
              {"use_fcr", c.use_fcr},
              {"require_cs_values", c.require_cs_values},
              {"w_cs", c.w_cs},
              {"w_depth", c.w_depth},
              {"w_aux", c.w_aux},
              {"max_sketches", c.max_sketches},
              {"max_fills_per_sketch", c.max_fills_per_sketch},
              {"max_total_fills", c.max_total_fills}};
}

// Overlays the keys present in `j`; unknown keys are an InvalidConfig error.
inline void apply_json(ExecConfig& c, const json& j) {
  for (const auto& [k, v] : j.items()) {
    try {
      if (k == "round_eq_tolerance") c.round_eq_tolerance = v.get<double>();
      else if (k == "most_threshold") c.most_threshold = v.get<double>();
      else if (k == "max_index") c.max_index = v.get<std::uint32_t>();
      else if (k == "empty_view_policy") {
        auto s = v.get<std::string>();
        if (s == "error") c.empty_view_policy = EmptyViewPolicy::error;
        else if (s == "false_propagate") c.empty_view_policy = EmptyViewPolicy::false_propagate;
        else throw Error(Errc::InvalidConfig, "empty_view_policy: " + s);
      } else if (k == "semantics") {
        auto s = v.get<std::string>();
        if (s == "fixed") c.semantics = Semantics::fixed;
        else if (s == "legacy") c.semantics = Semantics::legacy;
        else throw Error(Errc::InvalidConfig, "semantics: " + s);
      } else throw Error(Errc::InvalidConfig, "unknown exec key " + k);
    } catch (const json::exception& e) {
      throw Error(Errc::InvalidConfig, k + ": " + e.what());
    }
  }
}

inline void apply_json(SearchConfig& c, const json& j) {
  for (const auto& [k, v] : j.items()) {
    try {
      if (k == "beam_size") c.beam_size = v.get<std::uint32_t>();
      else if (k == "max_steps") c.max_steps = v.get<std::uint32_t>();
      else if (k == "max_sketch_depth") c.max_sketch_depth = v.get<std::uint32_t>();
      else if (k == "use_fcr") c.use_fcr = v.get<bool>();
      else if (k == "require_cs_values") c.require_cs_values = v.get<bool>();
      else if (k == "w_cs") c.w_cs = v.get<double>();
      else if (k == "w_depth") c.w_depth = v.get<double>();
      else if (k == "w_aux") c.w_aux = v.get<double>();
      else if (k == "max_sketches") c.max_sketches = v.get<std::uint64_t>();
      else if (k == "max_fills_per_sketch") c.max_fills_per_sketch = v.get<std::uint64_t>();
      else if (k == "max_total_fills") c.max_total_fills = v.get<std::uint64_t>();
      else throw Error(Errc::InvalidConfig, "unknown search key " + k);
    } catch (const json::exception& e) {
      throw Error(Errc::InvalidConfig, k + ": " + e.what());
    }
  }
}

}  // namespace tlt
