#pragma once

// Group treatment estimates under a Beta-Binomial model with a uniform
// Beta(1, 1) prior: point estimates, posterior variance and its normalized
// form, densities, and equal-tailed credible intervals.

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include "bayesfair/errors.hpp"
#include "bayesfair/incomplete_beta.hpp"

namespace bayesfair {

using Count = std::int64_t;

enum class Flavor { frequentist, bayesian };

inline std::string_view to_string(Flavor f) {
  return f == Flavor::frequentist ? "frequentist" : "bayesian";
}

inline Flavor parse_flavor(std::string_view s) {
  if (s == "frequentist") return Flavor::frequentist;
  if (s == "bayesian") return Flavor::bayesian;
  throw DomainError("unknown disparity flavor '" + std::string(s) + "'");
}

/// Counts for one group under a fairness criterion: `n` individuals satisfy
/// the conditioning event, `k` of them also receive the favorable event.
class GroupObservation {
 public:
  GroupObservation(std::string label, Count n, Count k)
      : label_(std::move(label)), n_(n), k_(k) {
    if (n < 0 || k < 0 || k > n) {
      throw InvalidObservation("group '" + label_ + "': need 0 <= k <= n, got n=" +
                               std::to_string(n) + " k=" + std::to_string(k));
    }
  }

  const std::string& label() const noexcept { return label_; }
  Count n() const noexcept { return n_; }
  Count k() const noexcept { return k_; }

  friend bool operator==(const GroupObservation&,
                         const GroupObservation&) = default;

 private:
  std::string label_;
  Count n_;
  Count k_;
};

/// Shape parameters of a Beta posterior. Both are positive integers because
/// the prior is Beta(1, 1) and the data are counts.
class PosteriorShape {
 public:
  PosteriorShape(Count alpha, Count beta) : alpha_(alpha), beta_(beta) {
    if (alpha < 1 || beta < 1) {
      throw DomainError("posterior shape needs alpha >= 1 and beta >= 1");
    }
  }

  Count alpha() const noexcept { return alpha_; }
  Count beta() const noexcept { return beta_; }
  Count sum() const noexcept { return alpha_ + beta_; }

  friend bool operator==(const PosteriorShape&, const PosteriorShape&) = default;

 private:
  Count alpha_;
  Count beta_;
};

struct TreatmentEstimate {
  double value;
  Flavor flavor;
};

struct CredibleInterval {
  double lo;
  double hi;
};

inline constexpr Count kPriorAlpha = 1;
inline constexpr Count kPriorBeta = 1;

// Variance of Beta(1, 2) is 1/18; it is the largest variance a posterior
// built from at least one observation can have.
inline constexpr double kMaxPosteriorVarianceInverse = 18.0;

namespace detail {
inline void require_nonempty(const GroupObservation& obs) {
  if (obs.n() == 0) {
    throw EmptyGroup("group '" + obs.label() + "' has no individuals (n = 0)");
  }
}
}  // namespace detail

inline TreatmentEstimate frequentist_treatment(const GroupObservation& obs) {
  detail::require_nonempty(obs);
  return {static_cast<double>(obs.k()) / static_cast<double>(obs.n()),
          Flavor::frequentist};
}

inline PosteriorShape posterior_from_counts(const GroupObservation& obs) {
  detail::require_nonempty(obs);
  return {kPriorAlpha + obs.k(), kPriorBeta + obs.n() - obs.k()};
}

inline TreatmentEstimate posterior_mean(const PosteriorShape& shape) {
  return {static_cast<double>(shape.alpha()) / static_cast<double>(shape.sum()),
          Flavor::bayesian};
}

inline double posterior_variance(const PosteriorShape& shape) {
  const double s = static_cast<double>(shape.sum());
  const double ab =
      static_cast<double>(shape.alpha()) * static_cast<double>(shape.beta());
  return ab / (s * s * (s + 1.0));
}

/// Posterior variance divided by the maximum achievable variance 1/18.
/// Only defined for posteriors of at least one observation (alpha + beta >= 3);
/// the bare prior would map to 1.5.
inline double normalized_variance(const PosteriorShape& shape) {
  if (shape.sum() < 3) {
    throw OutOfRange(
        "normalized_variance requires alpha + beta >= 3 (at least one "
        "observation)");
  }
  // Single division so that (1, 2) and (2, 1) give exactly 1.
  const double s = static_cast<double>(shape.sum());
  const double num = kMaxPosteriorVarianceInverse *
                     static_cast<double>(shape.alpha()) *
                     static_cast<double>(shape.beta());
  return num / (s * s * (s + 1.0));
}

inline double beta_pdf(const PosteriorShape& shape, double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("beta_pdf: x must lie in [0, 1]");
  }
  const double a = static_cast<double>(shape.alpha());
  const double b = static_cast<double>(shape.beta());
  if (x == 0.0) return shape.alpha() == 1 ? b : 0.0;
  if (x == 1.0) return shape.beta() == 1 ? a : 0.0;
  return std::exp((a - 1.0) * std::log(x) + (b - 1.0) * std::log1p(-x) -
                  math::log_beta(a, b));
}

inline double beta_cdf(const PosteriorShape& shape, double x) {
  return math::regularized_ibeta(static_cast<double>(shape.alpha()),
                                 static_cast<double>(shape.beta()), x);
}

inline double beta_quantile(const PosteriorShape& shape, double p) {
  return math::beta_quantile(static_cast<double>(shape.alpha()),
                             static_cast<double>(shape.beta()), p);
}

/// Equal-tailed interval holding `mass` of the posterior.
inline CredibleInterval credible_interval(const PosteriorShape& shape,
                                          double mass) {
  if (!(mass > 0.0 && mass < 1.0)) {
    throw DomainError("credible_interval: mass must lie in (0, 1)");
  }
  const double tail = 0.5 * (1.0 - mass);
  return {beta_quantile(shape, tail), beta_quantile(shape, 1.0 - tail)};
}

}  // namespace bayesfair
