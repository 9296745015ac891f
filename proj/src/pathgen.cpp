#include "cpath/pathgen.hpp"

#include <optional>
#include <string>

#include "cpath/errors.hpp"
#include "cpath/parallel.hpp"

namespace cpath {

namespace {

std::optional<CounterfactualPath> run_iteration(const BlackBoxModel& model, const Dataset& data,
                                                const CounterfactualPolicy& policy,
                                                const FeatureGraph& graph,
                                                const LabelVector& baseline, std::size_t k,
                                                std::uint64_t stream_seed) {
  Rng rng(stream_seed);
  Dataset working = data;  // reset to pristine X for this iteration
  std::vector<bool> visited(graph.p, false);

  CounterfactualPath path;
  std::size_t current = sample_start_vertex(graph, rng);

  for (std::size_t step = 0; step < k; ++step) {
    path.vertices.push_back(current);
    visited[current] = true;

    working.permute_column_in_place(current, rng);
    const LabelVector perturbed = model.predict(working);
    const double p = changed_fraction(baseline, perturbed);
    path.swap_trace.push_back(p);

    if (evaluate_policy(policy, p, rng) == 1) {
      path.triggered = true;
      return path;
    }
    if (step + 1 == k) break;

    const auto next = sample_next_vertex(graph, current, visited, rng);
    if (!next) break;  // exhausted or dead end; walk discarded
    current = *next;
  }
  return std::nullopt;
}

}  // namespace

PathSet generate_paths(const BlackBoxModel& model, const Dataset& data,
                       const CounterfactualPolicy& policy, const FeatureGraph& graph,
                       std::size_t n_iter, std::size_t k, std::uint64_t seed, int threads) {
  if (k < 1) throw ConfigError("pathgen", "k must be >= 1");
  if (n_iter < 1) throw ConfigError("pathgen", "n_iter must be >= 1");
  if (graph.p != data.cols())
    throw ConfigError("pathgen", "graph has " + std::to_string(graph.p) +
                                     " vertices, dataset has " + std::to_string(data.cols()) +
                                     " features");

  const LabelVector baseline = model.predict(data);

  std::vector<std::optional<CounterfactualPath>> slots(n_iter);
  auto body = [&](std::size_t i) {
    try {
      slots[i] = run_iteration(model, data, policy, graph, baseline, k, Rng::derive(seed, i));
    } catch (const std::exception& e) {
      throw ModelError("pathgen", "iteration " + std::to_string(i) + ": " + e.what());
    }
  };

  if (model.supports_concurrent_predict())
    parallel_for(n_iter, threads, body);
  else
    for (std::size_t i = 0; i < n_iter; ++i) body(i);

  PathSet out;
  out.n_iter = n_iter;
  out.k = k;
  out.p = graph.p;
  for (auto& slot : slots) {
    if (slot)
      out.paths.push_back(std::move(*slot));
    else
      ++out.untriggered;
  }
  return out;
}

}  // namespace cpath
