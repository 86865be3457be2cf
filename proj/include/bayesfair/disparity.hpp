#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bayesfair/bayes_estimation.hpp"
#include "bayesfair/errors.hpp"

namespace bayesfair {

struct GroupSummary {
  std::string label;
  Count n = 0;
  Count k = 0;
  double treatment = 0.0;        // k / n
  double bayes_treatment = 0.0;  // posterior mean
};

/// Which two groups produced a decision-maker point. For multi-group audits
/// `first` is the most privileged and `second` the least privileged group.
struct PairDetail {
  GroupSummary first;
  GroupSummary second;
  Flavor flavor = Flavor::frequentist;
  // Set when the extreme groups were picked by frequentist treatment while
  // the reported disparity is Bayesian.
  bool extremes_by_frequentist = false;
};

/// A decision-maker as the point (disparity, uncertainty) in [0, 1]^2.
struct DecisionMakerPoint {
  double disparity = 0.0;
  double uncertainty = 0.0;
  std::string label;
  std::optional<PairDetail> detail;
};

class GroupPair {
 public:
  GroupPair(GroupObservation i, GroupObservation j)
      : i_(std::move(i)), j_(std::move(j)) {
    if (i_.label() == j_.label()) {
      throw InvalidObservation("group pair needs two distinct labels, got '" +
                               i_.label() + "' twice");
    }
  }

  const GroupObservation& i() const noexcept { return i_; }
  const GroupObservation& j() const noexcept { return j_; }

 private:
  GroupObservation i_;
  GroupObservation j_;
};

namespace detail {

// |a/b - c/d| with one rounding step, so equal rational differences give
// bit-identical doubles (needed for exact tie detection downstream).
inline double abs_ratio_difference(Count a, Count b, Count c, Count d) {
  const Count num = a * d - c * b;
  return static_cast<double>(num < 0 ? -num : num) /
         static_cast<double>(b * d);
}

inline GroupSummary summarize(const GroupObservation& g) {
  return {g.label(), g.n(), g.k(), frequentist_treatment(g).value,
          posterior_mean(posterior_from_counts(g)).value};
}

}  // namespace detail

inline double frequentist_disparity(const GroupPair& pair) {
  detail::require_nonempty(pair.i());
  detail::require_nonempty(pair.j());
  return detail::abs_ratio_difference(pair.i().k(), pair.i().n(), pair.j().k(),
                                      pair.j().n());
}

inline double bayesian_disparity(const GroupPair& pair) {
  const PosteriorShape pi = posterior_from_counts(pair.i());
  const PosteriorShape pj = posterior_from_counts(pair.j());
  return detail::abs_ratio_difference(pi.alpha(), pi.sum(), pj.alpha(),
                                      pj.sum());
}

/// Mean of the two groups' normalized posterior variances.
inline double disparity_uncertainty(const GroupPair& pair) {
  const double vi = normalized_variance(posterior_from_counts(pair.i()));
  const double vj = normalized_variance(posterior_from_counts(pair.j()));
  return 0.5 * (vi + vj);
}

inline double disparity(const GroupPair& pair, Flavor flavor) {
  return flavor == Flavor::frequentist ? frequentist_disparity(pair)
                                       : bayesian_disparity(pair);
}

inline DecisionMakerPoint decision_maker_from_pair(
    const GroupPair& pair, Flavor flavor = Flavor::frequentist,
    std::string label = {}) {
  DecisionMakerPoint p;
  p.disparity = disparity(pair, flavor);
  p.uncertainty = disparity_uncertainty(pair);
  p.label = std::move(label);
  p.detail = PairDetail{detail::summarize(pair.i()),
                        detail::summarize(pair.j()), flavor, false};
  return p;
}

/// Decision-maker for any number of groups: the disparity between the most
/// and the least privileged group (by frequentist treatment) and the
/// uncertainty of that pair. Ties go to the lexicographically smallest label.
inline DecisionMakerPoint multigroup_decision_maker(
    std::span<const GroupObservation> groups, std::string label = {},
    Flavor flavor = Flavor::frequentist) {
  if (groups.size() < 2) {
    throw TooFewGroups("need at least 2 groups, got " +
                       std::to_string(groups.size()));
  }
  for (const auto& g : groups) detail::require_nonempty(g);

  // Exact comparison of k_a / n_a against k_b / n_b.
  auto cmp = [](const GroupObservation& a, const GroupObservation& b) {
    const Count lhs = a.k() * b.n();
    const Count rhs = b.k() * a.n();
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
  };

  const GroupObservation* best = &groups.front();
  for (const auto& g : groups.subspan(1)) {
    const int c = cmp(g, *best);
    if (c > 0 || (c == 0 && g.label() < best->label())) best = &g;
  }
  const GroupObservation* worst = nullptr;
  for (const auto& g : groups) {
    if (&g == best) continue;
    if (worst == nullptr) {
      worst = &g;
      continue;
    }
    const int c = cmp(g, *worst);
    if (c < 0 || (c == 0 && g.label() < worst->label())) worst = &g;
  }

  DecisionMakerPoint p = decision_maker_from_pair(GroupPair(*best, *worst),
                                                  flavor, std::move(label));
  p.detail->extremes_by_frequentist = flavor == Flavor::bayesian;
  return p;
}

}  // namespace bayesfair
