#pragma once

// Command-line front end. `run` is separate from main so the test suites can
// drive every subcommand in-process and inspect stdout/stderr.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bayesfair/bayesfair.hpp"

namespace bayesfair::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public Error {
 public:
  using Error::Error;
};

enum class Format { json, csv };

namespace detail {

struct OutputOptions {
  std::string format;
  int precision = report::kDefaultPrecision;

  Format parsed_format() const {
    return format == "json" ? Format::json : Format::csv;
  }
};

inline void add_output_options(CLI::App* cmd, OutputOptions& o,
                               const std::string& default_format) {
  o.format = default_format;
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  cmd->add_option("--precision", o.precision, "Decimals in numeric output")
      ->check(CLI::Range(0, 17))
      ->capture_default_str();
}

inline Count parse_count(std::string_view text, std::size_t line,
                         std::string_view column) {
  text = trim(text);
  Count v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("column '" + std::string(column) +
                         "' is not an integer: '" + std::string(text) + "'",
                     line);
  }
  return v;
}

inline std::string read_input(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin),
            std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct CountRows {
  std::vector<DecisionMakerPoint> points;
  std::vector<double> secondary;
};

// Rows of `label,n_i,k_i,n_j,k_j` (extra columns allowed).
inline CountRows read_count_rows(const std::string& path, char delimiter,
                                 Flavor flavor,
                                 const std::optional<std::string>& tie_col) {
  const Dataset data = parse_dataset(read_input(path), {delimiter});
  const std::size_t lcol = data.column_index("label");
  const std::size_t cols[4] = {data.column_index("n_i"), data.column_index("k_i"),
                               data.column_index("n_j"), data.column_index("k_j")};
  static constexpr const char* kNames[4] = {"n_i", "k_i", "n_j", "k_j"};
  std::optional<std::size_t> tcol;
  if (tie_col) tcol = data.column_index(*tie_col);

  CountRows out;
  for (std::size_t r = 0; r < data.size(); ++r) {
    const std::size_t line = r + 2;
    Count v[4];
    for (int c = 0; c < 4; ++c) {
      v[c] = parse_count(data.cell(r, cols[c]), line, kNames[c]);
    }
    try {
      GroupPair pair(GroupObservation("i", v[0], v[1]),
                     GroupObservation("j", v[2], v[3]));
      out.points.push_back(decision_maker_from_pair(
          pair, flavor, std::string(trim(data.cell(r, lcol)))));
    } catch (const Error& e) {
      throw ParseError(e.what(), line);
    }
    if (tcol) {
      const std::string cell(trim(data.cell(r, *tcol)));
      try {
        std::size_t used = 0;
        out.secondary.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ParseError("tie column value is not a number: '" + cell + "'",
                         line);
      }
    }
  }
  if (out.points.empty()) throw EmptyInput("no decision-maker rows in input");
  return out;
}

inline void emit(std::ostream& out, const report::Json& j) {
  out << j.dump(2) << '\n';
}

}  // namespace detail

/// Runs the CLI with `args` (args[0] is the program name). Machine-readable
/// output goes to `out`, diagnostics to `err`. Returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  using detail::OutputOptions;
  namespace rep = report;

  CLI::App app{"Disparity, uncertainty and utility of group-fairness assessments"};
  app.require_subcommand(1);

  std::string flavor_name = "frequentist";
  std::string utility_name = "topsis";
  auto add_flavor = [&](CLI::App* cmd) {
    cmd->add_option("--disparity", flavor_name, "Disparity flavor")
        ->check(CLI::IsMember({"frequentist", "bayesian"}))
        ->capture_default_str();
  };
  auto add_utility = [&](CLI::App* cmd) {
    cmd->add_option("--utility", utility_name, "Utility function")
        ->check(CLI::IsMember({"topsis", "norm"}))
        ->capture_default_str();
  };

  // score
  auto* score = app.add_subcommand("score", "Score one decision-maker from counts n_i k_i n_j k_j");
  std::vector<Count> score_counts;
  double score_mass = 0.95;
  OutputOptions score_out;
  score->add_option("counts", score_counts, "n_i k_i n_j k_j")
      ->expected(4)
      ->required();
  score->add_option("--mass", score_mass, "Credible interval mass")
      ->capture_default_str();
  add_flavor(score);
  add_output_options(score, score_out, "json");

  // rank / select
  std::string list_path;
  bool list_tab = false;
  std::optional<std::string> tie_col;
  OutputOptions rank_out;
  auto* rank = app.add_subcommand("rank", "Rank decision-makers from a file of count rows");
  auto* select = app.add_subcommand("select", "Print the decision-maker with the highest utility");
  for (auto* cmd : {rank, select}) {
    cmd->add_option("file", list_path,
                    "Delimited file with columns label,n_i,k_i,n_j,k_j ('-' for stdin)")
        ->required();
    cmd->add_flag("--tab", list_tab, "Input is tab separated");
    add_flavor(cmd);
    add_utility(cmd);
    add_output_options(cmd, rank_out, "csv");
  }
  rank->add_option("--tie-col", tie_col,
                   "Numeric column ordering equal-utility rows (higher first)");

  // audit
  auto* audit_cmd = app.add_subcommand("audit", "Audit a file of individual records");
  std::string audit_path;
  std::string criterion_name = "statistical-parity";
  std::string group_col = "group";
  std::string outcome_col = "outcome";
  std::optional<std::string> pred_col;
  std::string favorable;
  std::optional<std::string> audit_label;
  bool audit_tab = false;
  OutputOptions audit_out;
  audit_cmd->add_option("file", audit_path, "Delimited records file ('-' for stdin)")
      ->required();
  audit_cmd->add_option("--criterion", criterion_name, "Fairness criterion")
      ->check(CLI::IsMember(
          {"statistical-parity", "equal-opportunity", "predictive-parity"}))
      ->capture_default_str();
  audit_cmd->add_option("--group-col", group_col, "Protected attribute column")
      ->capture_default_str();
  audit_cmd->add_option("--outcome-col", outcome_col, "Observed outcome column")
      ->capture_default_str();
  audit_cmd->add_option("--pred-col", pred_col, "Predicted outcome column");
  audit_cmd->add_option("--favorable", favorable, "Cell value of the favorable outcome")
      ->required();
  audit_cmd->add_option("--label", audit_label, "Decision-maker label (default: file stem)");
  audit_cmd->add_flag("--tab", audit_tab, "Input is tab separated");
  add_flavor(audit_cmd);
  add_utility(audit_cmd);
  add_output_options(audit_cmd, audit_out, "json");

  // synth
  auto* synth = app.add_subcommand("synth", "Rank the exhaustive synthetic grid");
  std::vector<Count> sizes{1, 5, 10, 50};
  std::optional<std::size_t> extremes;
  OutputOptions synth_out;
  synth->add_option("--sizes", sizes, "Group sizes, comma separated")
      ->delimiter(',')
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  synth->add_option("--extremes", extremes,
                    "Only the N highest and N lowest ranked rows");
  add_flavor(synth);
  add_utility(synth);
  add_output_options(synth, synth_out, "csv");

  // posterior
  auto* posterior = app.add_subcommand("posterior", "Posterior density and credible interval for counts n k");
  std::vector<Count> post_counts;
  double post_mass = 0.95;
  std::size_t post_samples = 101;
  OutputOptions post_out;
  posterior->add_option("counts", post_counts, "n k")->expected(2)->required();
  posterior->add_option("--mass", post_mass, "Credible interval mass")
      ->capture_default_str();
  posterior->add_option("--samples", post_samples, "Density sample points")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1000000}))
      ->capture_default_str();
  add_output_options(posterior, post_out, "csv");

  // indiff
  auto* indiff = app.add_subcommand("indiff", "Points on the topsis indifference curve");
  double target = 0.0;
  std::size_t indiff_samples = 101;
  OutputOptions indiff_out;
  indiff->add_option("target", target, "Utility value in [-1, 1]")->required();
  indiff->add_option("--samples", indiff_samples, "Uncertainty grid points")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}))
      ->capture_default_str();
  add_output_options(indiff, indiff_out, "csv");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    const Flavor flavor = parse_flavor(flavor_name);
    const Utility& utility = utility_for(parse_utility_choice(utility_name));

    if (*score) {
      const int p = score_out.precision;
      if (!(score_mass > 0.0 && score_mass < 1.0)) {
        throw UsageError("--mass must lie in (0, 1)");
      }
      std::optional<GroupPair> pair;
      try {
        GroupObservation gi("i", score_counts[0], score_counts[1]);
        GroupObservation gj("j", score_counts[2], score_counts[3]);
        if (gi.n() == 0 || gj.n() == 0) {
          throw EmptyGroup("group sizes must be >= 1");
        }
        pair.emplace(std::move(gi), std::move(gj));
      } catch (const Error& e) {
        throw UsageError(std::string("invalid counts: ") + e.what());
      }
      const DecisionMakerPoint dm = decision_maker_from_pair(*pair, flavor, "score");
      const double ut = u_topsis(dm).value;
      const double un = u_norm(dm).value;

      struct GroupInfo {
        const GroupObservation* obs;
        PosteriorShape shape;
        CredibleInterval ci;
      };
      std::vector<GroupInfo> groups;
      for (const GroupObservation* g : {&pair->i(), &pair->j()}) {
        const PosteriorShape s = posterior_from_counts(*g);
        groups.push_back({g, s, credible_interval(s, score_mass)});
      }

      if (score_out.parsed_format() == Format::json) {
        rep::Json j;
        j["disparity_flavor"] = std::string(to_string(flavor));
        j["disparity"] = rep::round_to(dm.disparity, p);
        j["uncertainty"] = rep::round_to(dm.uncertainty, p);
        j["utility"] = {{"topsis", rep::round_to(ut, p)},
                        {"norm", rep::round_to(un, p)}};
        rep::Json arr = rep::Json::array();
        for (const auto& g : groups) {
          rep::Json gj;
          gj["label"] = g.obs->label();
          gj["n"] = g.obs->n();
          gj["k"] = g.obs->k();
          gj["p"] = rep::round_to(frequentist_treatment(*g.obs).value, p);
          gj["p_bayes"] = rep::round_to(posterior_mean(g.shape).value, p);
          gj["alpha"] = g.shape.alpha();
          gj["beta"] = g.shape.beta();
          gj["normalized_variance"] =
              rep::round_to(normalized_variance(g.shape), p);
          gj["credible_interval"] = {{"mass", score_mass},
                                     {"lo", rep::round_to(g.ci.lo, p)},
                                     {"hi", rep::round_to(g.ci.hi, p)}};
          arr.push_back(std::move(gj));
        }
        j["groups"] = std::move(arr);
        detail::emit(out, j);
      } else {
        rep::write_csv_row(out, {"group", "n", "k", "p", "p_bayes", "alpha",
                                 "beta", "normalized_variance", "ci_mass",
                                 "ci_lo", "ci_hi", "disparity", "uncertainty",
                                 "u_topsis", "u_norm"});
        for (const auto& g : groups) {
          rep::write_csv_row(
              out, {g.obs->label(), std::to_string(g.obs->n()),
                    std::to_string(g.obs->k()),
                    rep::fixed(frequentist_treatment(*g.obs).value, p),
                    rep::fixed(posterior_mean(g.shape).value, p),
                    std::to_string(g.shape.alpha()),
                    std::to_string(g.shape.beta()),
                    rep::fixed(normalized_variance(g.shape), p),
                    rep::fixed(score_mass, p), rep::fixed(g.ci.lo, p),
                    rep::fixed(g.ci.hi, p), rep::fixed(dm.disparity, p),
                    rep::fixed(dm.uncertainty, p), rep::fixed(ut, p),
                    rep::fixed(un, p)});
        }
      }
      return kExitOk;
    }

    if (*rank || *select) {
      const auto rows = detail::read_count_rows(
          list_path, list_tab ? '\t' : ',', flavor,
          *rank ? tie_col : std::nullopt);
      const int p = rank_out.precision;
      if (*select) {
        const Selection s = select_optimal(rows.points, utility);
        if (rank_out.parsed_format() == Format::json) {
          rep::Json j;
          j["label"] = s.label;
          j["utility_function"] = s.utility.function_id;
          j["utility"] = rep::round_to(s.utility.value, p);
          detail::emit(out, j);
        } else {
          rep::write_csv_row(out, {s.label, rep::fixed(s.utility.value, p)});
        }
        return kExitOk;
      }
      const RankedSelection ranked = rank_all(rows.points, utility, rows.secondary);
      if (rank_out.parsed_format() == Format::json) {
        detail::emit(out, rep::to_json(ranked, p));
      } else {
        rep::write_csv(out, rep::rows_of(ranked), p);
      }
      return kExitOk;
    }

    if (*audit_cmd) {
      const CriterionKind kind = parse_criterion_kind(criterion_name);
      if (kind != CriterionKind::statistical_parity && !pred_col) {
        throw UsageError("--criterion " + criterion_name + " requires --pred-col");
      }
      FairnessCriterion criterion;
      switch (kind) {
        case CriterionKind::equal_opportunity:
          criterion = equal_opportunity(group_col, outcome_col, *pred_col, favorable);
          break;
        case CriterionKind::predictive_parity:
          criterion = predictive_parity(group_col, outcome_col, *pred_col, favorable);
          break;
        default:
          criterion = statistical_parity(group_col, outcome_col, favorable, pred_col);
          break;
      }
      const Dataset data =
          parse_dataset(detail::read_input(audit_path), {audit_tab ? '\t' : ','});
      std::string label = audit_label.value_or(
          audit_path == "-" ? "stdin"
                            : std::filesystem::path(audit_path).stem().string());
      const AuditReport r = audit(data, criterion, flavor, utility, std::move(label));
      for (const auto& w : r.warnings) err << "warning: " << w << '\n';
      if (audit_out.parsed_format() == Format::json) {
        detail::emit(out, rep::to_json(r, audit_out.precision));
      } else {
        rep::write_csv(out, r, audit_out.precision);
      }
      return kExitOk;
    }

    if (*synth) {
      GridSpec spec;
      spec.group_sizes = {sizes.begin(), sizes.end()};
      spec.flavor = flavor;
      spec.utility = parse_utility_choice(utility_name);
      const auto grid = generate_grid(spec);
      const int p = synth_out.precision;
      if (extremes) {
        const ExtremesTable t = table_extremes(grid, *extremes, utility);
        if (synth_out.parsed_format() == Format::json) {
          rep::Json j;
          j["count"] = grid.size();
          j["top"] = rep::rows_json(t.top, p);
          j["bottom"] = rep::rows_json(t.bottom, p);
          detail::emit(out, j);
        } else {
          std::vector<GridRow> rows = t.top;
          rows.insert(rows.end(), t.bottom.begin(), t.bottom.end());
          rep::write_csv(out, rows, p);
        }
      } else {
        const auto rows = ranked_grid(grid, utility);
        if (synth_out.parsed_format() == Format::json) {
          rep::Json j;
          j["count"] = rows.size();
          j["rows"] = rep::rows_json(rows, p);
          detail::emit(out, j);
        } else {
          rep::write_csv(out, rows, p);
        }
      }
      return kExitOk;
    }

    if (*posterior) {
      if (!(post_mass > 0.0 && post_mass < 1.0)) {
        throw UsageError("--mass must lie in (0, 1)");
      }
      std::optional<PosteriorShape> shape;
      try {
        shape = posterior_from_counts(GroupObservation("group", post_counts[0],
                                                       post_counts[1]));
      } catch (const Error& e) {
        throw UsageError(std::string("invalid counts: ") + e.what());
      }
      const CredibleInterval ci = credible_interval(*shape, post_mass);
      const double mean = posterior_mean(*shape).value;
      const int p = post_out.precision;
      std::vector<std::pair<double, double>> pts;
      for (std::size_t i = 0; i < post_samples; ++i) {
        const double x = static_cast<double>(i) / static_cast<double>(post_samples - 1);
        pts.emplace_back(x, beta_pdf(*shape, x));
      }
      if (post_out.parsed_format() == Format::json) {
        rep::Json j;
        j["n"] = post_counts[0];
        j["k"] = post_counts[1];
        j["alpha"] = shape->alpha();
        j["beta"] = shape->beta();
        j["mean"] = rep::round_to(mean, p);
        j["normalized_variance"] = rep::round_to(normalized_variance(*shape), p);
        j["credible_interval"] = {{"mass", post_mass},
                                  {"lo", rep::round_to(ci.lo, p)},
                                  {"hi", rep::round_to(ci.hi, p)}};
        rep::Json arr = rep::Json::array();
        for (const auto& [x, y] : pts) {
          arr.push_back({rep::round_to(x, p), rep::round_to(y, p)});
        }
        j["density"] = std::move(arr);
        detail::emit(out, j);
      } else {
        rep::write_csv_row(out, {"series", "x", "y"});
        for (const auto& [x, y] : pts) {
          rep::write_csv_row(out, {"pdf", rep::fixed(x, p), rep::fixed(y, p)});
        }
        rep::write_csv_row(out, {"ci_lo", rep::fixed(ci.lo, p),
                                 rep::fixed(beta_pdf(*shape, ci.lo), p)});
        rep::write_csv_row(out, {"ci_hi", rep::fixed(ci.hi, p),
                                 rep::fixed(beta_pdf(*shape, ci.hi), p)});
        rep::write_csv_row(out, {"mean", rep::fixed(mean, p),
                                 rep::fixed(beta_pdf(*shape, mean), p)});
      }
      return kExitOk;
    }

    if (*indiff) {
      if (!(target >= -1.0 && target <= 1.0)) {
        throw UsageError("target utility must lie in [-1, 1]");
      }
      const auto pts = indifference_points(target, indiff_samples);
      const int p = indiff_out.precision;
      if (indiff_out.parsed_format() == Format::json) {
        rep::Json j;
        j["target"] = target;
        rep::Json arr = rep::Json::array();
        for (const auto& pt : pts) {
          arr.push_back({{"disparity", rep::round_to(pt.disparity, p)},
                         {"uncertainty", rep::round_to(pt.uncertainty, p)}});
        }
        j["points"] = std::move(arr);
        detail::emit(out, j);
      } else {
        rep::write_csv_row(out, {"disparity", "uncertainty"});
        for (const auto& pt : pts) {
          rep::write_csv_row(out, {rep::fixed(pt.disparity, p),
                                   rep::fixed(pt.uncertainty, p)});
        }
      }
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace bayesfair::cli
