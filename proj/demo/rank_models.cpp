// Ranks four classifiers from the counts of their most and least privileged
// groups, then re-ranks them with a custom utility that weighs uncertainty
// more heavily.

#include <cstdio>
#include <vector>

#include "bayesfair/bayesfair.hpp"

using namespace bayesfair;

int main() {
  struct Model {
    const char* name;
    Count ni, ki, nj, kj;
  };
  const Model models[] = {{"LR", 6, 6, 4, 2},
                          {"KNN", 6, 5, 4, 0},
                          {"SVM", 6, 6, 4, 0},
                          {"RF", 6, 6, 4, 0}};

  std::vector<DecisionMakerPoint> points;
  for (const auto& m : models) {
    GroupPair pair(GroupObservation("most", m.ni, m.ki),
                   GroupObservation("least", m.nj, m.kj));
    points.push_back(decision_maker_from_pair(pair, Flavor::frequentist, m.name));
  }

  const RankedSelection ranked = rank_all(points, topsis_utility());
  std::printf("%-4s %-5s %-10s %-12s %s\n", "rank", "model", "disparity",
              "uncertainty", "topsis");
  for (const auto& e : ranked.entries) {
    std::printf("%-4zu %-5s %-10.3f %-12.3f %.3f%s\n", e.rank, e.label.c_str(),
                e.point.disparity, e.point.uncertainty, e.utility.value,
                e.tie_group ? "  (tie)" : "");
  }

  // Any function that respects the corner preferences can be plugged in.
  const Utility cautious = Utility::make("cautious", [](double d, double s) {
    return (1.0 - 2.0 * d) / (1.0 + 2.0 * s);
  });
  const Selection best = select_optimal(points, cautious);
  std::printf("\nbest under '%s': %s (%.3f)\n", cautious.id().c_str(),
              best.label.c_str(), best.utility.value);
  return 0;
}
