#include "cpath/simgen.hpp"

#include <cmath>

#include "cpath/errors.hpp"

namespace cpath {

Scenario parse_scenario(const std::string& name) {
  if (name == "cond-dep-1") return Scenario::kCondDep1;
  if (name == "cond-dep-2") return Scenario::kCondDep2;
  if (name == "correlation") return Scenario::kCorrelation;
  if (name == "cond-indep") return Scenario::kCondIndep;
  if (name == "barabasi") return Scenario::kBarabasi;
  throw ConfigError("simulate", "unknown scenario '" + name + "'");
}

std::string scenario_name(Scenario scenario) {
  switch (scenario) {
    case Scenario::kCondDep1: return "cond-dep-1";
    case Scenario::kCondDep2: return "cond-dep-2";
    case Scenario::kCorrelation: return "correlation";
    case Scenario::kCondIndep: return "cond-indep";
    case Scenario::kBarabasi: return "barabasi";
  }
  return "?";
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

namespace {

std::vector<std::string> feature_names(std::size_t p) {
  std::vector<std::string> names;
  names.reserve(p);
  for (std::size_t j = 0; j < p; ++j) names.push_back("x" + std::to_string(j + 1));
  return names;
}

}  // namespace

SimOutput simulate(const SimConfig& config) {
  if (config.scenario == Scenario::kBarabasi)
    return simulate_barabasi(config.n_vertices, config.m, config.n, config.seed);
  if (config.n < 1) throw ConfigError("simulate", "n must be >= 1");

  const std::size_t p = 2 + config.n_noise;
  Rng rng(config.seed);

  std::vector<double> values(config.n * p);
  for (auto& v : values) v = rng.normal(0.0, 2.0);  // N(0, sd 2), row-major draws
  std::vector<int> prior(config.n);
  for (auto& y : prior) y = rng.bernoulli(0.5) ? 1 : 0;

  std::vector<int> labels(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    const double d1 = values[i * p + 0];
    const double d2 = values[i * p + 1];
    int y = prior[i];
    switch (config.scenario) {
      case Scenario::kCondDep1:
        if (d1 >= 0.0) {
          if (d2 >= 0.0) y = 1;
        } else {
          if (d2 >= 0.0) y = 0;
        }
        break;
      case Scenario::kCondDep2:
        if (d1 >= 0.0) y = d2 <= 0.0 ? 1 : 0;
        break;
      case Scenario::kCorrelation:
        if (d1 >= 0.0 && d2 >= 0.0) y = 1;
        break;
      case Scenario::kCondIndep:
        if (d1 >= 0.0 && d2 >= 0.0) break;  // "next": keep the prior draw
        if (d1 >= 0.0) y = 1;
        if (d2 >= 0.0) y = 0;
        break;
      case Scenario::kBarabasi:
        break;  // handled above
    }
    labels[i] = y + 1;  // {0,1} -> {1,2}
  }

  return SimOutput{Dataset(feature_names(p), std::move(values)),
                   LabelVector(std::move(labels), 2),
                   {0, 1},
                   std::nullopt};
}

SimOutput simulate_barabasi(std::size_t n_vertices, std::size_t m, std::size_t n_rows,
                            std::uint64_t seed) {
  if (n_vertices < 2) throw ConfigError("simulate", "barabasi needs at least two vertices");
  if (n_rows < 1) throw ConfigError("simulate", "n_rows must be >= 1");

  Rng graph_rng(Rng::derive(seed, 0));
  const FeatureGraph graph = barabasi_graph(n_vertices, m, graph_rng);
  const auto edges = undirected_edges(graph);
  if (edges.empty()) throw ConfigError("simulate", "barabasi graph has no edges");

  Rng pick_rng(Rng::derive(seed, 1));
  auto [v1, v2] = edges[pick_rng.below(edges.size())];
  if (pick_rng.bernoulli(0.5)) std::swap(v1, v2);  // coefficients 5 and 3 are asymmetric

  Rng data_rng(Rng::derive(seed, 2));
  std::vector<double> values(n_rows * n_vertices);
  for (auto& v : values) v = data_rng.normal(0.0, 1.0);

  std::vector<int> labels(n_rows);
  for (std::size_t i = 0; i < n_rows; ++i) {
    const double z = 5.0 * values[i * n_vertices + v1] + 3.0 * values[i * n_vertices + v2];
    labels[i] = (data_rng.bernoulli(sigmoid(z)) ? 1 : 0) + 1;
  }

  return SimOutput{Dataset(feature_names(n_vertices), std::move(values)),
                   LabelVector(std::move(labels), 2),
                   {v1, v2},
                   graph};
}

}  // namespace cpath
