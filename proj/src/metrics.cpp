#include "cpath/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cpath/errors.hpp"
#include "cpath/parallel.hpp"
#include "cpath/policy.hpp"
#include "cpath/rng.hpp"

namespace cpath {

double accuracy(const LabelVector& labels, const LabelVector& predictions) {
  if (labels.size() != predictions.size())
    throw ConfigError("metric", "label vectors differ in length");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == predictions[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double auc_binary(const std::vector<double>& scores, const LabelVector& labels) {
  if (scores.size() != labels.size()) throw ConfigError("metric", "score/label length mismatch");
  const auto ranks = average_ranks(scores);
  double positive_rank_sum = 0.0;
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (labels[i] == 2) {
      positive_rank_sum += ranks[i];
      ++n_pos;
    }
  const std::size_t n_neg = scores.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw ConfigError("metric", "AUC needs both classes present");
  return (positive_rank_sum - static_cast<double>(n_pos) * (n_pos + 1) / 2.0) /
         (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw ConfigError("correlation", "need two same-length series of >= 2 points");
  const double n = static_cast<double>(a.size());
  const double mean_a = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mean_b = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0)
    throw ConfigError("correlation", std::string("zero variance in the ") +
                                         (var_a == 0.0 ? "first" : "second") +
                                         " series, correlation undefined");
  return cov / std::sqrt(var_a * var_b);
}

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  return pearson(average_ranks(a), average_ranks(b));
}

double rank_correlation(const ExplanationScores& a, const ExplanationScores& b) {
  if (a.scores.size() != b.scores.size() || a.scores.size() < 2)
    throw ConfigError("correlation", "score vectors must share a length >= 2");
  return spearman(a.scores, b.scores);
}

ExplanationScores pfi(const BlackBoxModel& model, const Dataset& data, const LabelVector& labels,
                      int n_repeats, std::uint64_t seed, int threads) {
  if (n_repeats < 1) throw ConfigError("pfi", "n_repeats must be >= 1");
  if (labels.size() != data.rows()) throw ConfigError("pfi", "labels do not match dataset");

  const double baseline = accuracy(labels, model.predict(data));
  const std::size_t p = data.cols();
  std::vector<double> scores(p, 0.0);

  auto one_feature = [&](std::size_t j) {
    double drop_sum = 0.0;
    for (int r = 0; r < n_repeats; ++r) {
      Rng rng(Rng::derive(seed, j * static_cast<std::size_t>(n_repeats) + r));
      const Dataset permuted = permute_column(data, j, rng);
      drop_sum += baseline - accuracy(labels, model.predict(permuted));
    }
    scores[j] = drop_sum / n_repeats;
  };

  if (model.supports_concurrent_predict())
    parallel_for(p, threads, one_feature);
  else
    for (std::size_t j = 0; j < p; ++j) one_feature(j);

  return ExplanationScores{std::move(scores), ScoreSource::kPfi};
}

double coverage(const ExplanationScores& scores, const std::vector<std::size_t>& signal_features) {
  if (signal_features.empty()) throw ConfigError("coverage", "signal feature set is empty");
  const std::size_t p = scores.scores.size();
  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores.scores[a] != scores.scores[b]) return scores.scores[a] > scores.scores[b];
    return a < b;  // ties at the boundary go to the lowest index
  });

  const std::size_t m = std::min(signal_features.size(), p);
  std::size_t hits = 0;
  for (std::size_t r = 0; r < m; ++r)
    if (std::find(signal_features.begin(), signal_features.end(), order[r]) !=
        signal_features.end())
      ++hits;
  return static_cast<double>(hits) / static_cast<double>(signal_features.size());
}

double sensitivity_n(const BlackBoxModel& model, const Dataset& data,
                     const ExplanationScores& scores, std::size_t n_subset,
                     std::size_t n_samples, std::uint64_t seed) {
  const std::size_t p = data.cols();
  if (n_subset < 1 || n_subset > p) throw ConfigError("sensitivity", "n_subset outside 1..p");
  if (n_subset == p)
    throw ConfigError("sensitivity", "n_subset = p admits a single subset, correlation undefined");
  if (n_samples < 2) throw ConfigError("sensitivity", "need at least two sampled subsets");
  if (scores.scores.size() != p) throw ConfigError("sensitivity", "score length mismatch");

  const LabelVector original = model.predict(data);

  std::vector<double> attribution(n_samples);
  std::vector<double> output_drop(n_samples);
  for (std::size_t s = 0; s < n_samples; ++s) {
    Rng rng(Rng::derive(seed, s));

    std::vector<std::size_t> features(p);
    std::iota(features.begin(), features.end(), 0);
    for (std::size_t i = 0; i < n_subset; ++i)
      std::swap(features[i], features[i + rng.below(p - i)]);
    features.resize(n_subset);
    std::sort(features.begin(), features.end());

    double att = 0.0;
    Dataset working = data;
    for (const std::size_t j : features) {
      att += scores.scores[j];
      working.permute_column_in_place(j, rng);
    }
    attribution[s] = att;
    // f(x)_c - f(x_S)_c with f(.)_c = fraction of rows keeping their
    // originally predicted class; on the unperturbed data that is exactly 1.
    output_drop[s] = changed_fraction(original, model.predict(working));
  }

  try {
    return pearson(attribution, output_drop);
  } catch (const ConfigError&) {
    throw ConfigError("sensitivity",
                      "degenerate series over " + std::to_string(n_samples) +
                          " subsets (attribution or output change has zero variance)");
  }
}

InfidelityResult infidelity(const BlackBoxModel& model, const Dataset& data,
                            const ExplanationScores& scores, const InfidelityConfig& config) {
  const std::size_t p = data.cols();
  const std::size_t n = data.rows();
  if (scores.scores.size() != p) throw ConfigError("infidelity", "score length mismatch");
  if (config.n_samples < 1) throw ConfigError("infidelity", "n_samples must be >= 1");
  if (config.perturbation == InfidelityConfig::Perturbation::kGaussian && !(config.sigma > 0.0))
    throw ConfigError("infidelity", "sigma must be > 0");
  if (config.perturbation == InfidelityConfig::Perturbation::kBaseline &&
      config.baseline.size() != p)
    throw ConfigError("infidelity", "baseline vector must have length p");

  const LabelVector original = model.predict(data);
  std::vector<int> target(original.labels());
  const std::vector<double> f_x = model.class_scores(data, target);

  double sum = 0.0, sum_sq = 0.0;
  std::size_t n_terms = 0;
  std::vector<double> shift(n * p);
  for (std::size_t s = 0; s < config.n_samples; ++s) {
    Rng rng(Rng::derive(config.seed, s));
    if (config.perturbation == InfidelityConfig::Perturbation::kGaussian) {
      for (auto& v : shift) v = rng.normal(0.0, config.sigma);
    } else {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j)
          shift[i * p + j] = data.at(i, j) - config.baseline[j];
    }

    std::vector<double> perturbed_values(n * p);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < p; ++j)
        perturbed_values[i * p + j] = data.at(i, j) - shift[i * p + j];
    const Dataset perturbed(data.columns(), std::move(perturbed_values));
    const std::vector<double> f_xp = model.class_scores(perturbed, target);

    for (std::size_t i = 0; i < n; ++i) {
      double dot = 0.0;
      for (std::size_t j = 0; j < p; ++j) dot += shift[i * p + j] * scores.scores[j];
      const double delta = f_x[i] - f_xp[i];
      const double term = config.form == InfidelityConfig::Form::kSquared
                              ? (dot - delta) * (dot - delta)
                              : dot - delta * delta;
      sum += term;
      sum_sq += term * term;
      ++n_terms;
    }
  }

  InfidelityResult result;
  result.n_terms = n_terms;
  result.value = sum / static_cast<double>(n_terms);
  if (n_terms > 1) {
    const double variance =
        std::max(0.0, (sum_sq - sum * sum / static_cast<double>(n_terms)) /
                          (static_cast<double>(n_terms) - 1.0));
    result.std_error = std::sqrt(variance / static_cast<double>(n_terms));
  }
  return result;
}

}  // namespace cpath
