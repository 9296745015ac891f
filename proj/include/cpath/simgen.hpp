#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cpath/dataset.hpp"
#include "cpath/feature_graph.hpp"

namespace cpath {

enum class Scenario { kCondDep1, kCondDep2, kCorrelation, kCondIndep, kBarabasi };

Scenario parse_scenario(const std::string& name);
std::string scenario_name(Scenario scenario);

struct SimConfig {
  Scenario scenario = Scenario::kCondDep1;
  std::size_t n = 100;        // rows
  std::size_t n_noise = 2;    // noise features beyond the two signal ones
  std::uint64_t seed = 0;
  // barabasi scenario only
  std::size_t n_vertices = 10;
  std::size_t m = 1;
};

struct SimOutput {
  Dataset dataset;
  LabelVector labels;                   // classes {1, 2}
  std::vector<std::size_t> signal_features;  // planted ground truth
  std::optional<FeatureGraph> graph;    // barabasi scenario only
};

/// Synthetic benchmark data. Scenarios 1-4 draw an n x (2 + n_noise) matrix
/// of iid Normal(0, sd=2) features and a Bernoulli(0.5) prior label, then
/// overwrite the label from the first two columns:
///   cond-dep-1:  D1 >= 0 ? (D2 >= 0 -> y = 1) : (D2 >= 0 -> y = 0)
///   cond-dep-2:  D1 >= 0 -> (y = D2 <= 0 ? 1 : 0)
///   correlation: D1 >= 0 and D2 >= 0 -> y = 1
///   cond-indep:  both >= 0 -> keep prior; else D1 >= 0 -> y = 1; D2 >= 0 -> y = 0
/// Signal features are always columns {0, 1}.
SimOutput simulate(const SimConfig& config);

/// Graph-masked outcome generator: Barabasi network, per-vertex Normal(0, 1)
/// feature columns, a uniformly chosen edge (v1, v2) with random orientation,
/// z = 5 x_{v1} + 3 x_{v2}, y ~ Bernoulli(sigmoid(z)).
SimOutput simulate_barabasi(std::size_t n_vertices, std::size_t m, std::size_t n_rows,
                            std::uint64_t seed);

double sigmoid(double z);

}  // namespace cpath
