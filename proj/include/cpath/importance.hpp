#pragma once

#include <cstdint>
#include <vector>

#include "cpath/pathgen.hpp"

namespace cpath {

/// p x p accumulator of path-edge weights. Entries stay integral (each path
/// adds k - l + 1 per edge, so shorter paths weigh more); normalization
/// happens only in the importance estimators.
struct TransitionMatrix {
  std::size_t p = 0;
  std::size_t k = 0;
  std::vector<std::uint64_t> weights;  // row-major p*p

  std::uint64_t at(std::size_t from, std::size_t to) const { return weights[from * p + to]; }
  std::uint64_t& at(std::size_t from, std::size_t to) { return weights[from * p + to]; }
  std::uint64_t total() const;
  bool all_zero() const { return total() == 0; }
};

enum class ImportanceMethod { kFraction, kStationary };

struct ImportanceVector {
  std::vector<double> scores;  // nonnegative, sums to 1
  ImportanceMethod method = ImportanceMethod::kFraction;
};

/// Length-one paths add k - l + 1 to the self-loop T[v1, v1]; longer paths
/// add k - l + 1 to every consecutive-pair entry T[v_i, v_{i+1}].
TransitionMatrix build_transition_matrix(const PathSet& paths);

/// Whether the fraction estimator counts incoming weights only (the formula
/// as written) or incoming plus outgoing (the "edges adjacent" reading).
enum class EdgeAggregation { kIncoming, kInOut };

/// Importance as each feature's share of edge weight: column sum over total,
/// or (column + row sums) / (2 * total) under kInOut. Errors on an all-zero
/// matrix (no counterfactuals, importance undefined).
ImportanceVector importance_fraction(const TransitionMatrix& matrix,
                                     EdgeAggregation aggregation = EdgeAggregation::kIncoming);

struct StationaryOptions {
  double damping = 0.01;  // teleport weight; 0 = undamped chain
  double tol = 1e-10;     // L1 residual target
  int max_iters = 10000;
};

struct StationaryStats {
  double residual = 0.0;
  int iterations = 0;
};

/// Stationary distribution of the row-normalized matrix (all-zero rows become
/// uniform), mixed with uniform teleportation, by power iteration from the
/// uniform start. Errors on an all-zero matrix or on non-convergence.
ImportanceVector importance_stationary(const TransitionMatrix& matrix,
                                       const StationaryOptions& options = {},
                                       StationaryStats* stats = nullptr);

}  // namespace cpath
