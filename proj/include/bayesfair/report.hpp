#pragma once

// JSON and flat-CSV renderings of audit reports and ranked tables. Numbers
// are rounded to a display precision (3 decimals by default); JSON objects
// keep insertion order so output is stable across runs.

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bayesfair/dataset.hpp"
#include "bayesfair/synthetic.hpp"
#include "bayesfair/utility.hpp"

namespace bayesfair::report {

using Json = nlohmann::ordered_json;

inline constexpr int kDefaultPrecision = 3;

inline double round_to(double x, int precision) {
  const double scale = std::pow(10.0, precision);
  const double r = std::round(x * scale) / scale;
  return r == 0.0 ? 0.0 : r;  // no "-0"
}

inline std::string fixed(double x, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, round_to(x, precision));
  return buf;
}

inline std::string csv_escape(std::string_view s) {
  if (s.find_first_of(",\"\n\r\t") == std::string_view::npos) {
    return std::string(s);
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline void write_csv_row(std::ostream& out,
                          const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << csv_escape(fields[i]);
  }
  out << '\n';
}

// ---------------------------------------------------------------------------
// Audit

inline Json group_json(const GroupSummary& g, int precision) {
  Json j;
  j["label"] = g.label;
  j["n"] = g.n;
  j["k"] = g.k;
  j["p"] = round_to(g.treatment, precision);
  return j;
}

inline Json to_json(const AuditReport& r, int precision = kDefaultPrecision) {
  const PairDetail& d = *r.point.detail;
  Json j;
  j["label"] = r.label;
  j["criterion"] = r.criterion;
  j["disparity_flavor"] = std::string(to_string(d.flavor));
  j["extremes_selected_by"] = "frequentist";
  j["disparity"] = round_to(r.point.disparity, precision);
  j["uncertainty"] = round_to(r.point.uncertainty, precision);
  j["utility_function"] = r.utility.function_id;
  j["utility"] = round_to(r.utility.value, precision);
  j["most_privileged"] = group_json(d.first, precision);
  j["least_privileged"] = group_json(d.second, precision);
  j["excluded_groups"] = r.excluded_groups;
  return j;
}

inline const std::vector<std::string>& audit_csv_header() {
  static const std::vector<std::string> h{
      "label",
      "criterion",
      "disparity_flavor",
      "disparity",
      "uncertainty",
      "utility_function",
      "utility",
      "most_privileged_label",
      "most_privileged_n",
      "most_privileged_k",
      "most_privileged_p",
      "least_privileged_label",
      "least_privileged_n",
      "least_privileged_k",
      "least_privileged_p",
      "excluded_groups"};
  return h;
}

inline void write_csv(std::ostream& out, const AuditReport& r,
                      int precision = kDefaultPrecision) {
  const PairDetail& d = *r.point.detail;
  std::string excluded;
  for (const auto& e : r.excluded_groups) {
    if (!excluded.empty()) excluded += ';';
    excluded += e;
  }
  write_csv_row(out, audit_csv_header());
  write_csv_row(out, {r.label,
                      r.criterion,
                      std::string(to_string(d.flavor)),
                      fixed(r.point.disparity, precision),
                      fixed(r.point.uncertainty, precision),
                      r.utility.function_id,
                      fixed(r.utility.value, precision),
                      d.first.label,
                      std::to_string(d.first.n),
                      std::to_string(d.first.k),
                      fixed(d.first.treatment, precision),
                      d.second.label,
                      std::to_string(d.second.n),
                      std::to_string(d.second.k),
                      fixed(d.second.treatment, precision),
                      excluded});
}

// ---------------------------------------------------------------------------
// Ranked rows (rank command and synthetic grid)

inline const std::vector<std::string>& row_csv_header() {
  static const std::vector<std::string> h{
      "rank", "label", "n_i", "k_i", "n_j", "k_j", "p_i", "p_j",
      "disparity", "uncertainty", "utility", "tie_group"};
  return h;
}

inline std::vector<std::string> row_fields(const GridRow& r, int precision) {
  return {std::to_string(r.rank),
          r.label,
          std::to_string(r.n_i),
          std::to_string(r.k_i),
          std::to_string(r.n_j),
          std::to_string(r.k_j),
          fixed(r.p_i, precision),
          fixed(r.p_j, precision),
          fixed(r.disparity, precision),
          fixed(r.uncertainty, precision),
          fixed(r.utility, precision),
          r.tie_group ? std::to_string(*r.tie_group + 1) : std::string()};
}

inline Json to_json(const GridRow& r, int precision = kDefaultPrecision) {
  Json j;
  j["rank"] = r.rank;
  j["label"] = r.label;
  j["n_i"] = r.n_i;
  j["k_i"] = r.k_i;
  j["n_j"] = r.n_j;
  j["k_j"] = r.k_j;
  j["p_i"] = round_to(r.p_i, precision);
  j["p_j"] = round_to(r.p_j, precision);
  j["disparity"] = round_to(r.disparity, precision);
  j["uncertainty"] = round_to(r.uncertainty, precision);
  j["utility"] = round_to(r.utility, precision);
  j["tie_group"] = r.tie_group ? Json(*r.tie_group + 1) : Json(nullptr);
  return j;
}

inline void write_csv(std::ostream& out, std::span<const GridRow> rows,
                      int precision = kDefaultPrecision) {
  write_csv_row(out, row_csv_header());
  for (const auto& r : rows) write_csv_row(out, row_fields(r, precision));
}

inline Json rows_json(std::span<const GridRow> rows, int precision) {
  Json arr = Json::array();
  for (const auto& r : rows) arr.push_back(to_json(r, precision));
  return arr;
}

inline std::vector<GridRow> rows_of(const RankedSelection& ranked) {
  std::vector<GridRow> rows;
  rows.reserve(ranked.entries.size());
  for (const auto& e : ranked.entries) rows.push_back(to_grid_row(e));
  return rows;
}

inline Json to_json(const RankedSelection& ranked,
                    int precision = kDefaultPrecision) {
  const std::vector<GridRow> rows = rows_of(ranked);
  Json j;
  j["utility_function"] =
      ranked.entries.empty() ? "" : ranked.entries.front().utility.function_id;
  j["rows"] = rows_json(rows, precision);
  j["tie_groups"] = ranked.tie_groups;
  return j;
}

}  // namespace bayesfair::report
