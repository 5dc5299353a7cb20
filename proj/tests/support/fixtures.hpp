#pragma once

#include <filesystem>
#include <string>

#include "tlt/dataset.hpp"
#include "tlt/table.hpp"

namespace tlt::testing {

inline constexpr const char* kEaglesLf =
    "eq { avg { filter_str_eq { all_rows ; result ; w } ; attendance } ; 52500 }";

inline std::filesystem::path data_dir() { return TLT_DATA_DIR; }
inline std::filesystem::path eagles_path() { return data_dir() / "eagles_table.json"; }
inline std::filesystem::path fixture_path() { return data_dir() / "fixtures" / "legacy_fixture.json"; }

inline const Table& eagles_table() {
  static const Table t = load_table_file(eagles_path());
  return t;
}

inline Table make_table(std::vector<std::string> cols, std::vector<std::vector<std::string>> rows) {
  Table t;
  t.caption = "t";
  t.columns = std::move(cols);
  t.rows = std::move(rows);
  return t;
}

}  // namespace tlt::testing
