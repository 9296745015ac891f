#pragma once

#include <string>

#include "cpath/dataset.hpp"
#include "cpath/rng.hpp"

namespace cpath {

/// Counterfactual policy: decides whether a cumulative perturbation changed
/// the predictions "substantially". Stochastic fires Bernoulli(p); threshold
/// fires iff p > kappa (strict).
struct CounterfactualPolicy {
  enum class Variant { kStochastic, kThreshold };

  Variant variant = Variant::kStochastic;
  double kappa = 0.0;  // threshold variant only, in [0, 1]

  static CounterfactualPolicy stochastic() { return {Variant::kStochastic, 0.0}; }
  static CounterfactualPolicy threshold(double kappa);

  /// Parses "stochastic" or "threshold:<kappa>".
  static CounterfactualPolicy parse(const std::string& text);
  std::string to_string() const;
};

/// Fraction of rows whose predicted class differs, exact count / n.
double changed_fraction(const LabelVector& original, const LabelVector& perturbed);

/// Policy indicator for a changed fraction p in [0, 1]. The stochastic
/// variant consumes exactly one rng draw; threshold consumes none.
int evaluate_policy(const CounterfactualPolicy& policy, double p, Rng& rng);

}  // namespace cpath
