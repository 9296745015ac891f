#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cpath/blackbox.hpp"
#include "cpath/dataset.hpp"

namespace cpath {

enum class ScoreSource { kCpathFraction, kCpathStationary, kPfi, kGini, kExternal };

struct ExplanationScores {
  std::vector<double> scores;
  ScoreSource source = ScoreSource::kExternal;
};

/// Fraction of rows where prediction equals the label.
double accuracy(const LabelVector& labels, const LabelVector& predictions);

/// Rank-based AUC of a score against binary labels {1, 2} (class 2 positive),
/// with average-rank tie handling.
double auc_binary(const std::vector<double>& scores, const LabelVector& labels);

/// Pearson correlation; errors when either series has zero variance.
double pearson(const std::vector<double>& a, const std::vector<double>& b);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

/// Spearman between two explainers' scores (the Table-1 style comparison).
double rank_correlation(const ExplanationScores& a, const ExplanationScores& b);

/// Permutation feature importance: mean accuracy drop over n_repeats of
/// permuting each column, against ground-truth labels.
ExplanationScores pfi(const BlackBoxModel& model, const Dataset& data, const LabelVector& labels,
                      int n_repeats, std::uint64_t seed, int threads = 0);

/// Share of planted signal features recovered among the top-|signal| scores;
/// rank ties resolve to the lowest feature index.
double coverage(const ExplanationScores& scores, const std::vector<std::size_t>& signal_features);

/// Pearson correlation between summed attributions of random size-n_subset
/// feature subsets and the prediction change caused by permuting them
/// (fraction of rows losing their original predicted class).
double sensitivity_n(const BlackBoxModel& model, const Dataset& data,
                     const ExplanationScores& scores, std::size_t n_subset,
                     std::size_t n_samples, std::uint64_t seed);

struct InfidelityConfig {
  enum class Perturbation { kGaussian, kBaseline };
  // Literal keeps the source formula's bracket placement E[I.Phi - (df)^2];
  // squared is the usual discrepancy E[(I.Phi - df)^2] and the default.
  enum class Form { kSquared, kLiteral };

  Perturbation perturbation = Perturbation::kGaussian;
  double sigma = 0.1;            // gaussian only, > 0
  std::vector<double> baseline;  // baseline-replace only, length p
  std::size_t n_samples = 16;
  std::uint64_t seed = 0;
  Form form = Form::kSquared;
};

struct InfidelityResult {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n_terms = 0;
};

/// Monte Carlo infidelity of an attribution vector: how well I . scores
/// predicts the change in the model's score for each row's original class
/// under perturbation x -> x - I.
InfidelityResult infidelity(const BlackBoxModel& model, const Dataset& data,
                            const ExplanationScores& scores, const InfidelityConfig& config);

}  // namespace cpath
