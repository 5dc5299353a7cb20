#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tlt/common.hpp"
#include "tlt/table.hpp"

namespace tlt {

using json = nlohmann::json;

enum class Split { train, dev, test };

constexpr std::string_view to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::dev: return "dev";
    case Split::test: return "test";
  }
  return "?";
}

// File names of the public release, by split.
constexpr std::string_view split_file_name(Split s) {
  switch (s) {
    case Split::train: return "train.json";
    case Split::dev: return "valid.json";
    case Split::test: return "test.json";
  }
  return "";
}

struct DatasetRecord {
  std::size_t index = 0;  // position in the source file
  Split split = Split::train;
  std::string caption;
  Table table;
  std::string statement;
  std::string logic_str;         // without the trailing "= true" marker
  bool had_true_marker = false;  // the marker was present and stripped
  json source;                   // original object, unknown fields included

  std::string id() const { return std::string(to_string(split)) + "-" + std::to_string(index); }
};

// Strips a trailing "= true" / "=true" (any letter case) from a logic string.
inline std::string strip_true_marker(std::string_view logic, bool* stripped = nullptr) {
  auto s = text::normalize_ws(logic);
  auto lower = text::to_lower(s);
  for (std::string_view marker : {"= true", "=true"}) {
    if (lower.size() >= marker.size() && lower.compare(lower.size() - marker.size(), marker.size(), marker) == 0) {
      if (stripped) *stripped = true;
      return text::normalize_ws(std::string_view(s).substr(0, s.size() - marker.size()));
    }
  }
  if (stripped) *stripped = false;
  return s;
}

namespace detail {

inline std::string cell_text(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "";
  return j.dump();
}

inline std::vector<std::string> string_list(const json& j, const char* field) {
  if (!j.is_array()) throw Error(Errc::MalformedRecord, std::string(field) + " is not a list");
  std::vector<std::string> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(cell_text(x));
  return out;
}

}  // namespace detail

// Accepts the dataset record shape (topic, table_header, table_cont) or the
// minimal shape (caption, columns, rows).
inline Table table_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::MalformedRecord, "table is not an object");
  Table t;
  bool dataset_shape = j.contains("table_header");
  const char* cap = dataset_shape ? "topic" : "caption";
  const char* cols = dataset_shape ? "table_header" : "columns";
  const char* rows = dataset_shape ? "table_cont" : "rows";
  if (!j.contains(cols)) throw Error(Errc::MalformedRecord, std::string("missing field ") + cols);
  if (!j.contains(rows)) throw Error(Errc::MalformedRecord, std::string("missing field ") + rows);
  if (j.contains(cap)) t.caption = detail::cell_text(j.at(cap));
  t.columns = detail::string_list(j.at(cols), cols);
  if (!j.at(rows).is_array()) throw Error(Errc::MalformedRecord, std::string(rows) + " is not a list");
  for (const auto& r : j.at(rows)) t.rows.push_back(detail::string_list(r, rows));
  t.check();
  return t;
}

inline json table_to_json(const Table& t) {
  return json{{"caption", t.caption}, {"columns", t.columns}, {"rows", t.rows}};
}

inline DatasetRecord record_from_json(const json& j, std::size_t index, Split split) {
  try {
    if (!j.is_object()) throw Error(Errc::MalformedRecord, "record is not an object");
    DatasetRecord rec;
    rec.index = index;
    rec.split = split;
    rec.table = table_from_json(j);
    rec.caption = rec.table.caption;
    if (!j.contains("logic_str") || !j.at("logic_str").is_string())
      throw Error(Errc::MalformedRecord, "missing string field logic_str");
    rec.logic_str = strip_true_marker(j.at("logic_str").get<std::string>(), &rec.had_true_marker);
    if (j.contains("sent")) rec.statement = detail::cell_text(j.at("sent"));
    rec.source = j;
    return rec;
  } catch (const Error& e) {
    throw Error(Errc::MalformedRecord, "record " + std::to_string(index) + ": " + e.detail());
  }
}

// Known fields rewritten from the record; every other source field kept as is.
inline json record_to_json(const DatasetRecord& rec) {
  json j = rec.source.is_object() ? rec.source : json::object();
  j["topic"] = rec.caption;
  j["table_header"] = rec.table.columns;
  j["table_cont"] = rec.table.rows;
  j["sent"] = rec.statement;
  j["logic_str"] = rec.had_true_marker ? rec.logic_str + " = true" : rec.logic_str;
  return j;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::FileNotFound, path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json read_json_file(const std::filesystem::path& path) {
  auto content = read_file(path);
  if (text::normalize_ws(content).empty()) return json::array();
  try {
    return json::parse(content);
  } catch (const json::parse_error& e) {
    throw Error(Errc::MalformedRecord, path.string() + ": " + e.what());
  }
}

inline std::vector<DatasetRecord> load_dataset(const std::filesystem::path& path, Split split) {
  auto doc = read_json_file(path);
  if (!doc.is_array()) throw Error(Errc::MalformedRecord, path.string() + ": top level is not a list");
  std::vector<DatasetRecord> out;
  out.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) out.push_back(record_from_json(doc[i], i, split));
  return out;
}

inline void write_json_file(const std::filesystem::path& path, const json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::FileNotFound, "cannot write " + path.string());
  out << doc.dump(1) << '\n';
}

// A table file: minimal table JSON, a single record, or a dataset list
// (`record` selects the entry, default the first).
inline Table load_table_file(const std::filesystem::path& path, std::size_t record = 0) {
  auto doc = read_json_file(path);
  try {
    if (doc.is_array()) {
      if (record >= doc.size())
        throw Error(Errc::MalformedRecord, "record " + std::to_string(record) + " out of range");
      return table_from_json(doc[record]);
    }
    return table_from_json(doc);
  } catch (const Error& e) {
    if (e.code() == Errc::MalformedRecord) throw Error(Errc::MalformedRecord, path.string() + ": " + e.detail());
    throw;
  }
}

}  // namespace tlt
