#pragma once

// JSON group specifications:
//   {"name": str, "table": [[int]]}
//   {"name": str, "degree": int, "generators": [[int]]}
// An optional "labels" array names the elements of a table spec.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hstab/group.hpp"

namespace hstab {

inline FiniteGroup group_from_json(const nlohmann::json& spec, const GroupLimits& limits = {}) {
  if (!spec.is_object()) throw InvalidInput("group spec must be a JSON object");
  try {
    const std::string name = spec.value("name", std::string("G"));
    if (spec.contains("table")) {
      auto rows = spec.at("table").get<std::vector<std::vector<std::int64_t>>>();
      std::vector<std::string> labels;
      if (spec.contains("labels")) labels = spec.at("labels").get<std::vector<std::string>>();
      return group_from_table(name, rows, std::move(labels), limits);
    }
    if (spec.contains("generators")) {
      if (!spec.contains("degree")) throw InvalidInput("permutation spec needs \"degree\"");
      const auto degree = spec.at("degree").get<std::int64_t>();
      if (degree < 1) throw InvalidInput("degree must be positive");
      auto gens = spec.at("generators").get<std::vector<std::vector<std::int64_t>>>();
      return group_from_permutations(name, static_cast<std::size_t>(degree), gens, limits);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed group spec: ") + e.what());
  }
  throw InvalidInput("group spec needs either \"table\" or \"generators\"");
}

inline FiniteGroup group_from_json_text(const std::string& text, const GroupLimits& limits = {}) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(std::string("malformed JSON: ") + e.what());
  }
  return group_from_json(j, limits);
}

inline FiniteGroup load_group_spec(const std::string& path, const GroupLimits& limits = {}) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot read group spec " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return group_from_json_text(ss.str(), limits);
}

inline nlohmann::json group_to_json(const FiniteGroup& g) {
  std::vector<std::vector<Elem>> rows(g.order(), std::vector<Elem>(g.order()));
  for (Elem a = 0; a < g.order(); ++a)
    for (Elem b = 0; b < g.order(); ++b) rows[a][b] = g.mul(a, b);
  return {{"name", g.name()}, {"table", rows}, {"labels", g.labels()}};
}

}  // namespace hstab
