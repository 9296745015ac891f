#pragma once

#include <cstdint>
#include <vector>

#include "cpath/blackbox.hpp"
#include "cpath/dataset.hpp"
#include "cpath/feature_graph.hpp"
#include "cpath/policy.hpp"

namespace cpath {

/// One stored counterfactual path: the visited feature sequence and the
/// cumulative changed-prediction fraction after each prefix. Stored paths end
/// at the first prefix that fired the policy.
struct CounterfactualPath {
  std::vector<std::size_t> vertices;
  std::vector<double> swap_trace;
  bool triggered = false;

  friend bool operator==(const CounterfactualPath&, const CounterfactualPath&) = default;
};

/// Multiset of triggered paths plus the sampling budget bookkeeping.
/// Identical paths from different iterations are kept: they carry evidence
/// weight in the transition matrix.
struct PathSet {
  std::vector<CounterfactualPath> paths;
  std::size_t n_iter = 0;
  std::size_t k = 0;
  std::size_t p = 0;
  std::size_t untriggered = 0;  // walks that exhausted without firing

  friend bool operator==(const PathSet&, const PathSet&) = default;
};

/// Counterfactual path sampling. Each of n_iter iterations restarts from the
/// pristine dataset, walks the graph up to k vertices, permutes each visited
/// column cumulatively, recomputes predictions and asks the policy; the walk
/// is stored at the first firing prefix and discarded on exhaustion.
///
/// Iterations draw from Rng::derive(seed, iteration) substreams, so parallel
/// runs merge in iteration order and reproduce the serial output exactly.
/// Model call count: one baseline predict plus one per appended vertex.
PathSet generate_paths(const BlackBoxModel& model, const Dataset& data,
                       const CounterfactualPolicy& policy, const FeatureGraph& graph,
                       std::size_t n_iter, std::size_t k, std::uint64_t seed, int threads = 0);

}  // namespace cpath
