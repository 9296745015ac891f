#pragma once

#include <cstdint>
#include <vector>

#include "cpath/forest.hpp"
#include "cpath/policy.hpp"
#include "cpath/simgen.hpp"

namespace cpath {

/// Multi-seed simulate -> train -> explain -> score sweep over one synthetic
/// scenario. Seed s of the sweep derives all of its sub-seeds from
/// derive(base_seed, s), so sweeps are reproducible and order-independent.
struct PipelineConfig {
  Scenario scenario = Scenario::kCondDep1;
  std::size_t rows = 100;
  std::size_t n_noise = 2;
  std::size_t n_seeds = 50;
  std::uint64_t base_seed = 1;

  ForestConfig forest;  // per-run seed derived, the seed field here is ignored
  CounterfactualPolicy policy = CounterfactualPolicy::stochastic();
  std::size_t n_iter = 1000;
  std::size_t k = 4;
  int pfi_repeats = 10;

  // barabasi scenario only
  std::size_t n_vertices = 10;
  std::size_t m = 1;
  bool walk_knowledge_graph = false;  // sample on the generated network

  int threads = 0;
};

struct PipelineRun {
  double coverage_cpath_fraction = 0.0;
  double coverage_cpath_stationary = 0.0;
  double coverage_gini = 0.0;
  double coverage_pfi = 0.0;
  double spearman_cpath_gini = 0.0;
  double spearman_pfi_gini = 0.0;
  std::size_t stored_paths = 0;
};

struct Summary {
  double min = 0.0;
  double mean = 0.0;
  double max = 0.0;
};

Summary summarize(const std::vector<double>& values);

struct PipelineResult {
  std::vector<PipelineRun> runs;

  std::vector<double> collect(double PipelineRun::* field) const;
};

PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace cpath
