#pragma once

// Delimited-text ingestion and per-group counting under a fairness
// criterion. A criterion is a pair of events over records: E2 selects who
// is counted (n), E1 selects who of those counts as favorable (k).

#include <cstddef>
#include <functional>
#include <istream>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bayesfair/disparity.hpp"
#include "bayesfair/errors.hpp"
#include "bayesfair/utility.hpp"

namespace bayesfair {

inline std::string_view trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n\v\f";
  const auto first = s.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kSpace);
  return s.substr(first, last - first + 1);
}

class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<std::string> columns,
          std::vector<std::vector<std::string>> rows)
      : columns_(std::move(columns)), rows_(std::move(rows)) {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      index_.emplace(columns_[i], i);
    }
    for (const auto& r : rows_) {
      if (r.size() != columns_.size()) {
        throw DomainError("dataset row width does not match the schema");
      }
    }
  }

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  std::size_t size() const noexcept { return rows_.size(); }

  bool has_column(std::string_view name) const {
    return index_.find(std::string(name)) != index_.end();
  }

  std::size_t column_index(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) {
      throw MissingColumn("column '" + std::string(name) + "' not in header");
    }
    return it->second;
  }

  const std::string& cell(std::size_t row, std::size_t col) const {
    return rows_.at(row).at(col);
  }

  const std::vector<std::string>& row(std::size_t i) const { return rows_.at(i); }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct ParseOptions {
  char delimiter = ',';
};

/// Parses delimited text with a header row. Fields may be double-quoted;
/// a doubled quote inside a quoted field is a literal quote. Cells are kept
/// verbatim. Blank lines are skipped.
inline Dataset parse_dataset(std::string_view text, ParseOptions opts = {}) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::vector<std::vector<std::string>> records;
  std::vector<std::size_t> record_lines;

  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool after_closing_quote = false;
  std::size_t line = 1;
  std::size_t record_line = 1;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
    after_closing_quote = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record_lines.push_back(record_line);
    record.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
          after_closing_quote = true;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == opts.delimiter) {
      end_field();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (!(record.empty() && field.empty() && !field_was_quoted)) {
        end_record();
      }
      record_line = ++line;
    } else if (c == '"' && field.empty() && !field_was_quoted) {
      in_quotes = true;
      field_was_quoted = true;
    } else if (after_closing_quote) {
      throw ParseError("unexpected character after closing quote", line);
    } else {
      field.push_back(c);
    }
  }
  if (in_quotes) throw ParseError("unterminated quoted field", record_line);
  if (!record.empty() || !field.empty() || field_was_quoted) end_record();

  if (records.empty()) throw ParseError("empty input: missing header row", 1);

  std::vector<std::string> header = std::move(records.front());
  std::set<std::string> seen;
  for (const auto& h : header) {
    if (!seen.insert(std::string(trim(h))).second) {
      throw ParseError("duplicate column '" + h + "' in header",
                       record_lines.front());
    }
  }
  for (auto& h : header) h = std::string(trim(h));

  std::vector<std::vector<std::string>> rows;
  rows.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != header.size()) {
      throw ParseError("row " + std::to_string(r) + " has " +
                           std::to_string(records[r].size()) +
                           " fields, header has " +
                           std::to_string(header.size()),
                       record_lines[r]);
    }
    rows.push_back(std::move(records[r]));
  }
  return Dataset(std::move(header), std::move(rows));
}

inline Dataset parse_dataset(std::istream& in, ParseOptions opts = {}) {
  std::string text{std::istreambuf_iterator<char>(in),
                   std::istreambuf_iterator<char>()};
  return parse_dataset(std::string_view(text), opts);
}

// ---------------------------------------------------------------------------
// Fairness criteria

enum class CriterionKind {
  statistical_parity,
  equal_opportunity,
  predictive_parity,
  custom
};

inline std::string_view to_string(CriterionKind k) {
  switch (k) {
    case CriterionKind::statistical_parity: return "statistical-parity";
    case CriterionKind::equal_opportunity: return "equal-opportunity";
    case CriterionKind::predictive_parity: return "predictive-parity";
    case CriterionKind::custom: return "custom";
  }
  return "custom";
}

inline CriterionKind parse_criterion_kind(std::string_view s) {
  if (s == "statistical-parity") return CriterionKind::statistical_parity;
  if (s == "equal-opportunity") return CriterionKind::equal_opportunity;
  if (s == "predictive-parity") return CriterionKind::predictive_parity;
  throw DomainError("unknown criterion '" + std::string(s) + "'");
}

class RecordView {
 public:
  RecordView(const Dataset& data, std::size_t row) : data_(&data), row_(row) {}

  /// Trimmed cell value.
  std::string_view get(std::string_view column) const {
    return trim(data_->cell(row_, data_->column_index(column)));
  }

 private:
  const Dataset* data_;
  std::size_t row_;
};

using EventPredicate = std::function<bool(const RecordView&)>;

struct FairnessCriterion {
  CriterionKind kind = CriterionKind::statistical_parity;
  std::string protected_column;
  std::string outcome_column;
  std::optional<std::string> predicted_column;
  std::string favorable_value;
  // Only used by custom criteria.
  EventPredicate favorable_event;    // E1
  EventPredicate conditioning_event; // E2

  void validate() const {
    if (protected_column.empty()) {
      throw DomainError("criterion needs a protected column");
    }
    switch (kind) {
      case CriterionKind::statistical_parity:
        if (outcome_column.empty() && !predicted_column) {
          throw DomainError(
              "statistical parity needs an outcome or prediction column");
        }
        break;
      case CriterionKind::equal_opportunity:
      case CriterionKind::predictive_parity:
        if (!predicted_column || predicted_column->empty()) {
          throw DomainError(std::string(to_string(kind)) +
                            " needs a prediction column");
        }
        if (outcome_column.empty()) {
          throw DomainError(std::string(to_string(kind)) +
                            " needs an outcome column");
        }
        break;
      case CriterionKind::custom:
        if (!favorable_event || !conditioning_event) {
          throw DomainError("custom criterion needs both event predicates");
        }
        break;
    }
  }

  /// Columns a record must carry for this criterion.
  std::vector<std::string> required_columns() const {
    std::vector<std::string> cols{protected_column};
    switch (kind) {
      case CriterionKind::statistical_parity:
        cols.push_back(predicted_column ? *predicted_column : outcome_column);
        break;
      case CriterionKind::equal_opportunity:
      case CriterionKind::predictive_parity:
        cols.push_back(outcome_column);
        cols.push_back(*predicted_column);
        break;
      case CriterionKind::custom:
        break;
    }
    return cols;
  }
};

/// Statistical parity: everyone is counted, favorable means the decision
/// column equals `favorable`. The decision column is the prediction column
/// when one is given, otherwise the outcome column.
inline FairnessCriterion statistical_parity(
    std::string protected_column, std::string outcome_column,
    std::string favorable, std::optional<std::string> predicted_column = {}) {
  FairnessCriterion c;
  c.kind = CriterionKind::statistical_parity;
  c.protected_column = std::move(protected_column);
  c.outcome_column = std::move(outcome_column);
  c.predicted_column = std::move(predicted_column);
  c.favorable_value = std::move(favorable);
  return c;
}

/// True positive rate: counted if the outcome is favorable, favorable if
/// the prediction is too.
inline FairnessCriterion equal_opportunity(std::string protected_column,
                                           std::string outcome_column,
                                           std::string predicted_column,
                                           std::string favorable) {
  FairnessCriterion c;
  c.kind = CriterionKind::equal_opportunity;
  c.protected_column = std::move(protected_column);
  c.outcome_column = std::move(outcome_column);
  c.predicted_column = std::move(predicted_column);
  c.favorable_value = std::move(favorable);
  return c;
}

/// Positive predictive value: counted if the prediction is favorable,
/// favorable if the outcome is too.
inline FairnessCriterion predictive_parity(std::string protected_column,
                                           std::string outcome_column,
                                           std::string predicted_column,
                                           std::string favorable) {
  FairnessCriterion c = equal_opportunity(
      std::move(protected_column), std::move(outcome_column),
      std::move(predicted_column), std::move(favorable));
  c.kind = CriterionKind::predictive_parity;
  return c;
}

inline FairnessCriterion custom_criterion(std::string protected_column,
                                          EventPredicate favorable_event,
                                          EventPredicate conditioning_event) {
  FairnessCriterion c;
  c.kind = CriterionKind::custom;
  c.protected_column = std::move(protected_column);
  c.favorable_event = std::move(favorable_event);
  c.conditioning_event = std::move(conditioning_event);
  return c;
}

struct GroupCounts {
  // Groups with n >= 1, ordered by label.
  std::vector<GroupObservation> groups;
  // Groups present in the data but with nobody satisfying E2.
  std::vector<std::string> excluded;
  std::vector<std::string> warnings;
};

inline GroupCounts group_counts(const Dataset& data,
                                const FairnessCriterion& criterion) {
  criterion.validate();
  for (const auto& col : criterion.required_columns()) {
    (void)data.column_index(col);
  }

  const std::size_t zcol = data.column_index(criterion.protected_column);
  const std::string_view fav = trim(criterion.favorable_value);

  auto equals = [&](std::size_t row, std::size_t col) {
    return trim(data.cell(row, col)) == fav;
  };

  std::function<bool(std::size_t)> e1;
  std::function<bool(std::size_t)> e2;
  switch (criterion.kind) {
    case CriterionKind::statistical_parity: {
      const std::size_t dcol = data.column_index(
          criterion.predicted_column ? *criterion.predicted_column
                                     : criterion.outcome_column);
      e2 = [](std::size_t) { return true; };
      e1 = [=](std::size_t r) { return equals(r, dcol); };
      break;
    }
    case CriterionKind::equal_opportunity: {
      const std::size_t ycol = data.column_index(criterion.outcome_column);
      const std::size_t pcol = data.column_index(*criterion.predicted_column);
      e2 = [=](std::size_t r) { return equals(r, ycol); };
      e1 = [=](std::size_t r) { return equals(r, pcol); };
      break;
    }
    case CriterionKind::predictive_parity: {
      const std::size_t ycol = data.column_index(criterion.outcome_column);
      const std::size_t pcol = data.column_index(*criterion.predicted_column);
      e2 = [=](std::size_t r) { return equals(r, pcol); };
      e1 = [=](std::size_t r) { return equals(r, ycol); };
      break;
    }
    case CriterionKind::custom:
      e2 = [&](std::size_t r) {
        return criterion.conditioning_event(RecordView(data, r));
      };
      e1 = [&](std::size_t r) {
        return criterion.favorable_event(RecordView(data, r));
      };
      break;
  }

  std::map<std::string, std::pair<Count, Count>, std::less<>> tally;
  for (std::size_t r = 0; r < data.size(); ++r) {
    auto& [n, k] = tally[std::string(trim(data.cell(r, zcol)))];
    if (!e2(r)) continue;
    ++n;
    if (e1(r)) ++k;
  }

  GroupCounts out;
  for (const auto& [label, nk] : tally) {
    if (nk.first == 0) {
      out.excluded.push_back(label);
      out.warnings.push_back("group '" + label +
                             "' has no records satisfying the conditioning "
                             "event and was excluded");
      continue;
    }
    out.groups.emplace_back(label, nk.first, nk.second);
  }
  return out;
}

struct AuditReport {
  std::string label;
  std::string criterion;
  DecisionMakerPoint point;  // detail.first / detail.second = most / least
  UtilityValue utility;
  std::vector<std::string> excluded_groups;
  std::vector<std::string> warnings;

  const GroupSummary& most_privileged() const { return point.detail->first; }
  const GroupSummary& least_privileged() const { return point.detail->second; }
};

inline AuditReport audit(const Dataset& data, const FairnessCriterion& criterion,
                         Flavor flavor, const Utility& utility,
                         std::string label = {}) {
  GroupCounts counts = group_counts(data, criterion);
  if (counts.groups.size() < 2) {
    throw TooFewGroups("audit needs at least 2 groups with n >= 1, found " +
                       std::to_string(counts.groups.size()));
  }
  AuditReport r;
  r.label = std::move(label);
  r.criterion = std::string(to_string(criterion.kind));
  r.point = multigroup_decision_maker(counts.groups, r.label, flavor);
  r.utility = utility(r.point);
  r.excluded_groups = std::move(counts.excluded);
  r.warnings = std::move(counts.warnings);
  return r;
}

}  // namespace bayesfair
