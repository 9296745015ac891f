#include "cpath/policy.hpp"

#include "cpath/errors.hpp"

namespace cpath {

CounterfactualPolicy CounterfactualPolicy::threshold(double kappa) {
  if (!(kappa >= 0.0 && kappa <= 1.0))
    throw ConfigError("policy", "kappa must be in [0, 1]");
  return {Variant::kThreshold, kappa};
}

CounterfactualPolicy CounterfactualPolicy::parse(const std::string& text) {
  if (text == "stochastic") return stochastic();
  const std::string prefix = "threshold:";
  if (text.rfind(prefix, 0) == 0) {
    try {
      return threshold(std::stod(text.substr(prefix.size())));
    } catch (const std::exception&) {
      throw ConfigError("policy", "cannot parse kappa in '" + text + "'");
    }
  }
  throw ConfigError("policy", "unknown policy '" + text + "' (want stochastic or threshold:<kappa>)");
}

std::string CounterfactualPolicy::to_string() const {
  if (variant == Variant::kStochastic) return "stochastic";
  return "threshold:" + std::to_string(kappa);
}

double changed_fraction(const LabelVector& original, const LabelVector& perturbed) {
  if (original.size() != perturbed.size())
    throw ConfigError("policy", "label vectors differ in length");
  std::size_t changed = 0;
  for (std::size_t i = 0; i < original.size(); ++i)
    if (original[i] != perturbed[i]) ++changed;
  return static_cast<double>(changed) / static_cast<double>(original.size());
}

int evaluate_policy(const CounterfactualPolicy& policy, double p, Rng& rng) {
  if (policy.variant == CounterfactualPolicy::Variant::kStochastic)
    return rng.bernoulli(p) ? 1 : 0;
  return p > policy.kappa ? 1 : 0;
}

}  // namespace cpath
