#pragma once

// Utility functions over decision-maker points, the corner-preference check
// every utility must pass, ranking, selection and indifference curves.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bayesfair/disparity.hpp"
#include "bayesfair/errors.hpp"

namespace bayesfair {

template <class F>
concept UtilityFunction = std::regular_invocable<const F&, double, double> &&
    std::convertible_to<std::invoke_result_t<const F&, double, double>, double>;

struct UtilityValue {
  double value = 0.0;
  std::string function_id;
};

namespace detail {
inline void require_unit_square(double disparity, double uncertainty) {
  if (!(disparity >= 0.0 && disparity <= 1.0) ||
      !(uncertainty >= 0.0 && uncertainty <= 1.0)) {
    throw DomainError("decision-maker coordinates must lie in [0, 1]");
  }
}
}  // namespace detail

/// Distance to the worst corner (1, 0) minus distance to the ideal (0, 0).
/// Evaluated as (1 - 2d) / (|p - (1,0)| + |p - (0,0)|), which is the same
/// quantity without the cancellation of subtracting two square roots.
inline double topsis_value(double disparity, double uncertainty) {
  detail::require_unit_square(disparity, uncertainty);
  const double to_worst = std::hypot(1.0 - disparity, uncertainty);
  const double to_ideal = std::hypot(disparity, uncertainty);
  return (1.0 - 2.0 * disparity) / (to_worst + to_ideal);
}

inline double norm_value(double disparity, double uncertainty) {
  return 0.5 * (topsis_value(disparity, uncertainty) + 1.0);
}

inline UtilityValue u_topsis(const DecisionMakerPoint& p) {
  return {topsis_value(p.disparity, p.uncertainty), "topsis"};
}

inline UtilityValue u_norm(const DecisionMakerPoint& p) {
  return {norm_value(p.disparity, p.uncertainty), "norm"};
}

// ---------------------------------------------------------------------------
// Corner preferences

struct AxiomCheck {
  std::string name;  // e.g. "u(0,0) > u(0,1)"
  double better = 0.0;
  double worse = 0.0;
  bool passed = false;
};

struct AxiomReport {
  std::vector<AxiomCheck> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const AxiomCheck& c) { return c.passed; });
  }

  std::vector<std::string> failures() const {
    std::vector<std::string> out;
    for (const auto& c : checks) {
      if (!c.passed) out.push_back(c.name);
    }
    return out;
  }
};

/// Checks the three stated corner preferences
///   (0,0) > (0,1) > (1,1) > (1,0)
/// and the three that follow by transitivity.
template <UtilityFunction F>
AxiomReport verify_utility_axioms(const F& u) {
  struct Corner {
    const char* name;
    double d;
    double s;
  };
  static constexpr Corner fair_certain{"(0,0)", 0.0, 0.0};
  static constexpr Corner fair_uncertain{"(0,1)", 0.0, 1.0};
  static constexpr Corner unfair_uncertain{"(1,1)", 1.0, 1.0};
  static constexpr Corner unfair_certain{"(1,0)", 1.0, 0.0};
  static constexpr std::pair<Corner, Corner> kOrder[] = {
      {fair_certain, fair_uncertain},
      {fair_uncertain, unfair_uncertain},
      {unfair_uncertain, unfair_certain},
      {fair_certain, unfair_uncertain},
      {fair_certain, unfair_certain},
      {fair_uncertain, unfair_certain},
  };

  AxiomReport report;
  for (const auto& [hi, lo] : kOrder) {
    AxiomCheck c;
    c.name = std::string("u") + hi.name + " > u" + lo.name;
    c.better = static_cast<double>(std::invoke(u, hi.d, hi.s));
    c.worse = static_cast<double>(std::invoke(u, lo.d, lo.s));
    c.passed = c.better > c.worse;
    report.checks.push_back(std::move(c));
  }
  return report;
}

/// A named utility function that is known to respect the corner
/// preferences. Plug-ins are checked when they are created.
class Utility {
 public:
  using Fn = std::function<double(double, double)>;

  template <UtilityFunction F>
  static Utility make(std::string id, F fn) {
    const AxiomReport report = verify_utility_axioms(fn);
    if (!report.passed()) {
      std::string msg = "utility '" + id + "' violates:";
      for (const auto& f : report.failures()) msg += " [" + f + "]";
      throw AxiomViolation(msg);
    }
    return Utility(std::move(id), Fn(std::move(fn)));
  }

  const std::string& id() const noexcept { return id_; }

  double evaluate(double disparity, double uncertainty) const {
    detail::require_unit_square(disparity, uncertainty);
    return fn_(disparity, uncertainty);
  }

  UtilityValue operator()(const DecisionMakerPoint& p) const {
    return {evaluate(p.disparity, p.uncertainty), id_};
  }

 private:
  Utility(std::string id, Fn fn) : id_(std::move(id)), fn_(std::move(fn)) {}

  std::string id_;
  Fn fn_;
};

enum class UtilityChoice { topsis, norm };

inline std::string_view to_string(UtilityChoice c) {
  return c == UtilityChoice::topsis ? "topsis" : "norm";
}

inline UtilityChoice parse_utility_choice(std::string_view s) {
  if (s == "topsis") return UtilityChoice::topsis;
  if (s == "norm") return UtilityChoice::norm;
  throw DomainError("unknown utility '" + std::string(s) + "'");
}

inline const Utility& topsis_utility() {
  static const Utility u = Utility::make("topsis", &topsis_value);
  return u;
}

inline const Utility& norm_utility() {
  static const Utility u = Utility::make("norm", &norm_value);
  return u;
}

inline const Utility& utility_for(UtilityChoice c) {
  return c == UtilityChoice::topsis ? topsis_utility() : norm_utility();
}

// ---------------------------------------------------------------------------
// Ranking and selection

struct RankedEntry {
  std::string label;
  DecisionMakerPoint point;
  UtilityValue utility;
  std::size_t rank = 0;  // 1-based position
  std::optional<std::size_t> tie_group;  // index into tie_groups
  std::optional<double> secondary;
};

struct RankedSelection {
  std::vector<RankedEntry> entries;
  // Labels of each run of two or more entries with identical utility.
  std::vector<std::vector<std::string>> tie_groups;
};

/// Orders points by descending utility. Equal utilities (compared exactly)
/// keep their input order, or descend by `secondary` when it is given, and
/// are reported as a tie group either way.
inline RankedSelection rank_all(std::span<const DecisionMakerPoint> points,
                                const Utility& utility,
                                std::span<const double> secondary = {}) {
  if (points.empty()) throw EmptyInput("rank_all: no decision-makers given");
  if (!secondary.empty() && secondary.size() != points.size()) {
    throw DomainError("rank_all: secondary key count does not match points");
  }

  std::vector<double> values(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    values[i] = utility.evaluate(points[i].disparity, points[i].uncertainty);
  }

  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (values[a] != values[b]) return values[a] > values[b];
                     if (!secondary.empty()) return secondary[a] > secondary[b];
                     return false;
                   });

  RankedSelection out;
  out.entries.reserve(points.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const std::size_t idx = order[pos];
    RankedEntry e;
    e.label = points[idx].label;
    e.point = points[idx];
    e.utility = {values[idx], utility.id()};
    e.rank = pos + 1;
    if (!secondary.empty()) e.secondary = secondary[idx];
    out.entries.push_back(std::move(e));
  }

  for (std::size_t start = 0; start < out.entries.size();) {
    std::size_t end = start + 1;
    while (end < out.entries.size() &&
           out.entries[end].utility.value == out.entries[start].utility.value) {
      ++end;
    }
    if (end - start > 1) {
      std::vector<std::string> group;
      for (std::size_t i = start; i < end; ++i) {
        out.entries[i].tie_group = out.tie_groups.size();
        group.push_back(out.entries[i].label);
      }
      out.tie_groups.push_back(std::move(group));
    }
    start = end;
  }
  return out;
}

struct Selection {
  std::string label;
  UtilityValue utility;
  std::size_t index = 0;  // position in the input
};

/// Arg-max of the utility in one pass; the first of equal maxima wins.
inline Selection select_optimal(std::span<const DecisionMakerPoint> points,
                                const Utility& utility) {
  if (points.empty()) {
    throw EmptyInput("select_optimal: no decision-makers given");
  }
  std::size_t best = 0;
  double best_value =
      utility.evaluate(points[0].disparity, points[0].uncertainty);
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double v = utility.evaluate(points[i].disparity, points[i].uncertainty);
    if (v > best_value) {
      best = i;
      best_value = v;
    }
  }
  return {points[best].label, {best_value, utility.id()}, best};
}

// ---------------------------------------------------------------------------
// Indifference curves

/// Points with topsis utility equal to `target`, one per uncertainty value
/// in an even grid of `samples` values over [0, 1]. Uncertainty values at
/// which the target is out of reach are skipped.
inline std::vector<DecisionMakerPoint> indifference_points(
    double target, std::size_t samples, double tolerance = 1e-10) {
  if (!(target >= -1.0 && target <= 1.0)) {
    throw DomainError("indifference target must lie in [-1, 1]");
  }
  if (samples == 0) throw DomainError("indifference needs at least 1 sample");

  std::vector<DecisionMakerPoint> out;
  for (std::size_t i = 0; i < samples; ++i) {
    const double sigma =
        samples == 1 ? 0.0
                     : static_cast<double>(i) / static_cast<double>(samples - 1);

    // topsis is strictly decreasing in the disparity for fixed sigma.
    const double top = topsis_value(0.0, sigma);
    const double bottom = topsis_value(1.0, sigma);
    if (target > top || target < bottom) continue;

    double delta;
    if (target == top) {
      delta = 0.0;
    } else if (target == bottom) {
      delta = 1.0;
    } else {
      double lo = 0.0;
      double hi = 1.0;
      delta = 0.5;
      while (hi - lo > tolerance) {
        delta = 0.5 * (lo + hi);
        const double u = topsis_value(delta, sigma);
        if (u == target) break;
        if (u > target) {
          lo = delta;
        } else {
          hi = delta;
        }
        delta = 0.5 * (lo + hi);
      }
    }
    DecisionMakerPoint p;
    p.disparity = delta;
    p.uncertainty = sigma;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace bayesfair
