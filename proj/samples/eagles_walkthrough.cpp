// Parses the eagles-season example, executes it, prints every node value,
// its sketch and content selection, then runs a small search over the table.

#include <iostream>

#include "tlt/tlt.hpp"

int main() {
  using namespace tlt;
  auto table = load_table_file(std::filesystem::path(TLT_DATA_DIR) / "eagles_table.json");
  auto lf = parse_lf("eq { avg { filter_str_eq { all_rows ; result ; w } ; attendance } ; 52500 }");

  std::cout << "lf:     " << serialize_lf(lf) << "\n";
  std::cout << "sketch: " << serialize_sketch(extract_sketch(lf)) << "\n";

  auto out = execute(lf, table);
  for (const auto& [path, value] : out.node_values)
    std::cout << "  " << path_string(path) << " = " << to_json_value(value).dump() << "\n";
  std::cout << "result: " << (out.ok() && *out.root_truth ? "true" : "false") << "\n";

  for (const auto& v : extract_cs(lf, table))
    std::cout << "cs: " << v.text << " " << to_string(v.category) << " from " << path_string(v.source_path) << "\n";

  SearchConfig cfg;
  cfg.max_sketch_depth = 3;
  cfg.beam_size = 5;
  auto cands = generate(table, extract_cs(lf, table), cfg);
  for (const auto& c : cands) std::cout << c.score << "  " << c.text << "\n";
  return 0;
}
