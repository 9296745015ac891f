#include "cpath/importance.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "cpath/errors.hpp"

namespace cpath {

std::uint64_t TransitionMatrix::total() const {
  return std::accumulate(weights.begin(), weights.end(), std::uint64_t{0});
}

TransitionMatrix build_transition_matrix(const PathSet& paths) {
  if (paths.k < 1) throw ConfigError("transition", "path set has k < 1");
  TransitionMatrix matrix{paths.p, paths.k, std::vector<std::uint64_t>(paths.p * paths.p, 0)};

  for (const auto& path : paths.paths) {
    const std::size_t l = path.vertices.size();
    if (l == 0 || l > paths.k)
      throw ConfigError("transition", "path length " + std::to_string(l) + " outside 1..k");
    for (const std::size_t v : path.vertices)
      if (v >= paths.p)
        throw ConfigError("transition", "vertex " + std::to_string(v) + " out of range");

    const std::uint64_t weight = paths.k - l + 1;
    if (l == 1) {
      matrix.at(path.vertices[0], path.vertices[0]) += weight;
      continue;
    }
    for (std::size_t i = 0; i + 1 < l; ++i)
      matrix.at(path.vertices[i], path.vertices[i + 1]) += weight;
  }
  return matrix;
}

ImportanceVector importance_fraction(const TransitionMatrix& matrix, EdgeAggregation aggregation) {
  const std::uint64_t total = matrix.total();
  if (total == 0)
    throw EmptyResultError("importance", "transition matrix is all zero, importance undefined");

  const std::size_t p = matrix.p;
  ImportanceVector out{std::vector<double>(p, 0.0), ImportanceMethod::kFraction};
  for (std::size_t j = 0; j < p; ++j) {
    std::uint64_t incoming = 0;
    for (std::size_t i = 0; i < p; ++i) incoming += matrix.at(i, j);
    if (aggregation == EdgeAggregation::kIncoming) {
      out.scores[j] = static_cast<double>(incoming) / static_cast<double>(total);
    } else {
      std::uint64_t outgoing = 0;
      for (std::size_t i = 0; i < p; ++i) outgoing += matrix.at(j, i);
      out.scores[j] = static_cast<double>(incoming + outgoing) / (2.0 * static_cast<double>(total));
    }
  }
  return out;
}

ImportanceVector importance_stationary(const TransitionMatrix& matrix,
                                       const StationaryOptions& options, StationaryStats* stats) {
  if (matrix.all_zero())
    throw EmptyResultError("importance", "transition matrix is all zero, importance undefined");
  if (!(options.damping >= 0.0 && options.damping <= 1.0))
    throw ConfigError("importance", "damping must be in [0, 1]");

  const std::size_t p = matrix.p;
  const double d = options.damping;

  // Row-normalized chain; all-zero rows become uniform.
  std::vector<double> transition(p * p);
  for (std::size_t i = 0; i < p; ++i) {
    std::uint64_t row_sum = 0;
    for (std::size_t j = 0; j < p; ++j) row_sum += matrix.at(i, j);
    for (std::size_t j = 0; j < p; ++j) {
      const double base = row_sum == 0
                              ? 1.0 / static_cast<double>(p)
                              : static_cast<double>(matrix.at(i, j)) / static_cast<double>(row_sum);
      transition[i * p + j] = (1.0 - d) * base + d / static_cast<double>(p);
    }
  }

  std::vector<double> pi(p, 1.0 / static_cast<double>(p));
  std::vector<double> next(p);
  double residual = 0.0;
  for (int iter = 1; iter <= options.max_iters; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < p; ++i) {
      const double mass = pi[i];
      for (std::size_t j = 0; j < p; ++j) next[j] += mass * transition[i * p + j];
    }
    // Renormalize to absorb float drift; the chain is row-stochastic.
    const double sum = std::accumulate(next.begin(), next.end(), 0.0);
    for (auto& x : next) x /= sum;

    residual = 0.0;
    for (std::size_t j = 0; j < p; ++j) residual += std::abs(next[j] - pi[j]);
    pi.swap(next);
    if (residual < options.tol) {
      if (stats) *stats = {residual, iter};
      return ImportanceVector{std::move(pi), ImportanceMethod::kStationary};
    }
  }
  throw ModelError("importance", "stationary distribution did not converge within " +
                                     std::to_string(options.max_iters) +
                                     " iterations (residual " + std::to_string(residual) + ")");
}

}  // namespace cpath
