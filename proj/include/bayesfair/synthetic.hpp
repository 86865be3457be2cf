#pragma once

// Exhaustive synthetic population of two-group decision-makers: every
// (n_i, k_i, n_j, k_j) with n from a set of group sizes and 0 <= k <= n.

#include <algorithm>
#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "bayesfair/disparity.hpp"
#include "bayesfair/utility.hpp"

namespace bayesfair {

struct GridSpec {
  std::set<Count> group_sizes{1, 5, 10, 50};
  Flavor flavor = Flavor::frequentist;
  UtilityChoice utility = UtilityChoice::topsis;

  void validate() const {
    if (group_sizes.empty()) throw DomainError("grid needs at least one group size");
    if (*group_sizes.begin() < 1) throw DomainError("group sizes must be >= 1");
  }
};

inline std::string grid_label(Count n_i, Count k_i, Count n_j, Count k_j) {
  return std::to_string(n_i) + ":" + std::to_string(k_i) + "|" +
         std::to_string(n_j) + ":" + std::to_string(k_j);
}

/// (sum over sizes of (n + 1))^2
inline std::size_t grid_cardinality(const GridSpec& spec) {
  std::size_t per_group = 0;
  for (Count n : spec.group_sizes) per_group += static_cast<std::size_t>(n + 1);
  return per_group * per_group;
}

/// All decision-makers of the grid in lexicographic (n_i, k_i, n_j, k_j)
/// order. Each point carries its counts in `detail`.
inline std::vector<DecisionMakerPoint> generate_grid(const GridSpec& spec) {
  spec.validate();
  std::vector<GroupObservation> side;
  for (Count n : spec.group_sizes) {
    for (Count k = 0; k <= n; ++k) side.emplace_back("", n, k);
  }

  std::vector<DecisionMakerPoint> grid;
  grid.reserve(side.size() * side.size());
  for (const auto& gi : side) {
    for (const auto& gj : side) {
      GroupPair pair(GroupObservation("i", gi.n(), gi.k()),
                     GroupObservation("j", gj.n(), gj.k()));
      grid.push_back(decision_maker_from_pair(
          pair, spec.flavor, grid_label(gi.n(), gi.k(), gj.n(), gj.k())));
    }
  }
  return grid;
}

struct GridRow {
  std::size_t rank = 0;
  std::string label;
  Count n_i = 0, k_i = 0, n_j = 0, k_j = 0;
  double p_i = 0.0, p_j = 0.0;
  double disparity = 0.0;
  double uncertainty = 0.0;
  double utility = 0.0;
  std::optional<std::size_t> tie_group;
};

inline GridRow to_grid_row(const RankedEntry& e) {
  GridRow r;
  r.rank = e.rank;
  r.label = e.label;
  if (e.point.detail) {
    const auto& d = *e.point.detail;
    r.n_i = d.first.n;
    r.k_i = d.first.k;
    r.n_j = d.second.n;
    r.k_j = d.second.k;
    r.p_i = d.first.treatment;
    r.p_j = d.second.treatment;
  }
  r.disparity = e.point.disparity;
  r.uncertainty = e.point.uncertainty;
  r.utility = e.utility.value;
  r.tie_group = e.tie_group;
  return r;
}

/// Every grid point ranked by utility.
inline std::vector<GridRow> ranked_grid(std::span<const DecisionMakerPoint> grid,
                                        const Utility& utility) {
  const RankedSelection ranked = rank_all(grid, utility);
  std::vector<GridRow> rows;
  rows.reserve(ranked.entries.size());
  for (const auto& e : ranked.entries) rows.push_back(to_grid_row(e));
  return rows;
}

struct ExtremesTable {
  std::vector<GridRow> top;
  std::vector<GridRow> bottom;
};

/// The `count` highest and `count` lowest ranked grid points.
inline ExtremesTable table_extremes(std::span<const DecisionMakerPoint> grid,
                                    std::size_t count, const Utility& utility) {
  ExtremesTable t;
  if (count == 0 || grid.empty()) return t;
  std::vector<GridRow> rows = ranked_grid(grid, utility);
  const std::size_t c = std::min(count, rows.size());
  t.top.assign(rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(c));
  t.bottom.assign(rows.end() - static_cast<std::ptrdiff_t>(c), rows.end());
  return t;
}

}  // namespace bayesfair
