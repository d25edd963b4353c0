#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hstab/congruences.hpp"
#include "hstab/hurwitz.hpp"
#include "hstab/orbits.hpp"

namespace hstab {

inline constexpr const char* kToolVersion = "hstab 1.0.0";

using ReportJson = nlohmann::ordered_json;

/// A report body plus an optional table used for CSV output.
struct Report {
  ReportJson body = ReportJson::object();
  std::vector<std::vector<std::string>> table;
};

enum class OutputFormat { Json, Csv, Text };

inline OutputFormat parse_format(const std::string& s) {
  if (s == "json") return OutputFormat::Json;
  if (s == "csv") return OutputFormat::Csv;
  if (s == "text") return OutputFormat::Text;
  throw InvalidInput("unknown format " + s);
}

inline nlohmann::json hurwitz_to_json(const HurwitzVector& v) {
  return {{"d", v.d}, {"genus", v.genus}, {"entries", v.entries}};
}

inline HurwitzVector hurwitz_from_json(const nlohmann::json& j) {
  try {
    return HurwitzVector(j.at("d").get<std::size_t>(), j.at("genus").get<std::size_t>(),
                         j.at("entries").get<std::vector<Elem>>());
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed Hurwitz vector: ") + e.what());
  }
}

inline ReportJson torsion_to_json(const AbelianShape& s) {
  ReportJson out = ReportJson::array();
  for (const auto& x : s.torsion) out.push_back(x.get_si());
  return out;
}

inline ReportJson shape_to_json(const AbelianShape& s) {
  return {{"torsion", torsion_to_json(s)}, {"free_rank", s.free_rank}};
}

inline ReportJson tally_to_json(const IdentityTally& t) {
  ReportJson j{{"name", t.name}, {"checked", t.checked}, {"failures", t.failures}, {"passed", t.passed()}};
  if (!t.passed()) j["first_failure"] = t.first_failure;
  return j;
}

inline ReportJson nu_summary_to_json(const NuSummary& s) {
  return {{"nu", nu_label(s.nu)},
          {"admissible", s.admissible},
          {"orbits", s.orbits},
          {"epsilon_classes", s.epsilon_classes},
          {"expected", s.expected},
          {"matches_expected", s.matches_expected}};
}

inline ReportJson genus_row_to_json(const GenusRow& r) {
  ReportJson per_nu = ReportJson::object();
  for (const NuSummary& s : r.nus) per_nu[nu_label(s.nu)] = s.orbits;
  ReportJson per_eps = ReportJson::object();
  for (const auto& [k, c] : r.per_epsilon) per_eps[k] = c;
  ReportJson nus = ReportJson::array();
  for (const NuSummary& s : r.nus) nus.push_back(nu_summary_to_json(s));
  ReportJson j{{"genus", r.genus},     {"orbits", r.orbits},         {"per_nu", per_nu},
               {"per_epsilon", per_eps}, {"admissible", r.admissible}, {"bijection", r.bijection},
               {"injective", r.injective}, {"states", r.states},     {"nu_types", nus}};
  if (r.stabilization) {
    j["stabilization"] = {{"from_genus", r.stabilization->from_genus},
                          {"surjective", r.stabilization->surjective},
                          {"well_defined", r.stabilization->well_defined},
                          {"orbits_hit", r.stabilization->orbits_hit}};
  } else {
    j["stabilization"] = nullptr;
  }
  return j;
}

inline ReportJson classification_to_json(const ClassificationReport& rep) {
  ReportJson rows = ReportJson::array();
  for (const GenusRow& r : rep.rows) rows.push_back(genus_row_to_json(r));
  ReportJson j{{"group", rep.group}, {"d", rep.d}, {"rows", rows}};
  j["stable_from"] = rep.stable_from ? ReportJson(*rep.stable_from) : ReportJson(nullptr);
  j["diagnosis"] = rep.diagnosis;
  return j;
}

/// One CSV row per (genus, nu).
inline std::vector<std::vector<std::string>> classification_table(const ClassificationReport& rep) {
  std::vector<std::vector<std::string>> t{
      {"genus", "nu", "admissible", "orbits", "epsilon_classes", "expected", "matches_expected"}};
  for (const GenusRow& r : rep.rows)
    for (const NuSummary& s : r.nus)
      t.push_back({std::to_string(r.genus), nu_label(s.nu), s.admissible ? "true" : "false", std::to_string(s.orbits),
                   std::to_string(s.epsilon_classes), std::to_string(s.expected),
                   s.matches_expected ? "true" : "false"});
  return t;
}

namespace detail {

inline std::string scalar_text(const ReportJson& j) {
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

inline void flatten(const ReportJson& j, const std::string& path, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    if (j.empty()) out.emplace_back(path, "{}");
    for (const auto& [k, v] : j.items()) flatten(v, path.empty() ? k : path + "." + k, out);
  } else if (j.is_array()) {
    bool scalars = true;
    for (const auto& v : j) scalars = scalars && !v.is_structured();
    if (scalars) {
      out.emplace_back(path, j.dump());
    } else {
      for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", out);
    }
  } else {
    out.emplace_back(path, scalar_text(j));
  }
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace detail

inline std::string render_report(const Report& r, OutputFormat fmt) {
  std::string out;
  switch (fmt) {
    case OutputFormat::Json: return r.body.dump(2) + "\n";
    case OutputFormat::Csv: {
      std::vector<std::vector<std::string>> rows = r.table;
      if (!rows.empty())
        for (const char* key : {"tool", "config"})
          if (r.body.contains(key)) out += std::string("# ") + key + " " + detail::scalar_text(r.body[key]) + "\n";
      if (rows.empty()) {
        rows.push_back({"key", "value"});
        std::vector<std::pair<std::string, std::string>> flat;
        detail::flatten(r.body, "", flat);
        for (auto& [k, v] : flat) rows.push_back({k, v});
      }
      for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + detail::csv_field(row[i]);
        out += "\n";
      }
      return out;
    }
    case OutputFormat::Text: {
      std::vector<std::pair<std::string, std::string>> flat;
      detail::flatten(r.body, "", flat);
      for (auto& [k, v] : flat) out += k + ": " + v + "\n";
      return out;
    }
  }
  return out;
}

}  // namespace hstab
