// Two groups with the same 80% favorable rate but different sizes: the
// posteriors share a mean and differ in spread.

#include <cstdio>

#include "bayesfair/bayesfair.hpp"

using namespace bayesfair;

int main() {
  for (const GroupObservation& g :
       {GroupObservation("large", 100, 80), GroupObservation("small", 10, 8)}) {
    const PosteriorShape s = posterior_from_counts(g);
    const CredibleInterval ci = credible_interval(s, 0.95);
    std::printf("%-6s n=%-4lld k=%-3lld Beta(%lld, %lld)  mean=%.3f  "
                "95%% interval=[%.3f, %.3f]  normalized variance=%.4f\n",
                g.label().c_str(), static_cast<long long>(g.n()),
                static_cast<long long>(g.k()), static_cast<long long>(s.alpha()),
                static_cast<long long>(s.beta()), posterior_mean(s).value, ci.lo,
                ci.hi, normalized_variance(s));
  }
  return 0;
}
