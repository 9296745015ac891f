#include "cpath/pipeline.hpp"

#include <algorithm>
#include <numeric>

#include "cpath/errors.hpp"
#include "cpath/importance.hpp"
#include "cpath/metrics.hpp"
#include "cpath/parallel.hpp"
#include "cpath/pathgen.hpp"

namespace cpath {

Summary summarize(const std::vector<double>& values) {
  if (values.empty()) throw ConfigError("pipeline", "nothing to summarize");
  Summary s;
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  return s;
}

std::vector<double> PipelineResult::collect(double PipelineRun::* field) const {
  std::vector<double> out;
  out.reserve(runs.size());
  for (const auto& run : runs) out.push_back(run.*field);
  return out;
}

PipelineResult run_pipeline(const PipelineConfig& config) {
  if (config.n_seeds < 1) throw ConfigError("pipeline", "n_seeds must be >= 1");

  PipelineResult result;
  result.runs.resize(config.n_seeds);

  parallel_for(config.n_seeds, config.threads, [&](std::size_t s) {
    const std::uint64_t master = Rng::derive(config.base_seed, s);

    SimConfig sim;
    sim.scenario = config.scenario;
    sim.n = config.rows;
    sim.n_noise = config.n_noise;
    sim.n_vertices = config.n_vertices;
    sim.m = config.m;
    sim.seed = Rng::derive(master, 1);
    const SimOutput out = simulate(sim);

    ForestConfig forest_cfg = config.forest;
    forest_cfg.seed = Rng::derive(master, 2);
    const RandomForest forest = train_random_forest(out.dataset, out.labels, forest_cfg);

    const FeatureGraph graph = (config.walk_knowledge_graph && out.graph)
                                   ? *out.graph
                                   : complete_graph(out.dataset.cols());
    const PathSet paths = generate_paths(forest, out.dataset, config.policy, graph,
                                         config.n_iter, config.k, Rng::derive(master, 3));

    PipelineRun run;
    run.stored_paths = paths.paths.size();

    const ExplanationScores gini{gini_importance(forest), ScoreSource::kGini};
    const ExplanationScores pfi_scores =
        pfi(forest, out.dataset, out.labels, config.pfi_repeats, Rng::derive(master, 4));

    run.coverage_gini = coverage(gini, out.signal_features);
    run.coverage_pfi = coverage(pfi_scores, out.signal_features);

    if (!paths.paths.empty()) {
      const TransitionMatrix matrix = build_transition_matrix(paths);
      const ImportanceVector fraction = importance_fraction(matrix);
      const ImportanceVector stationary = importance_stationary(matrix);
      const ExplanationScores cpath_fraction{fraction.scores, ScoreSource::kCpathFraction};
      run.coverage_cpath_fraction = coverage(cpath_fraction, out.signal_features);
      run.coverage_cpath_stationary = coverage(
          ExplanationScores{stationary.scores, ScoreSource::kCpathStationary}, out.signal_features);
      run.spearman_cpath_gini = rank_correlation(cpath_fraction, gini);
    } else {
      throw EmptyResultError("pipeline", "seed " + std::to_string(s) +
                                             " produced no counterfactual paths");
    }
    run.spearman_pfi_gini = rank_correlation(pfi_scores, gini);

    result.runs[s] = run;
  });

  return result;
}

}  // namespace cpath
