#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cpath/forest.hpp"
#include "cpath/importance.hpp"
#include "cpath/pathgen.hpp"
#include "cpath/policy.hpp"

namespace cpath {

/// Resolved configuration of one explain run. Serialized verbatim into the
/// report's provenance block so a run can be replayed from its report.
struct ExplainConfig {
  std::string data_path;
  bool has_header = true;
  std::optional<std::string> label_column;

  std::optional<std::string> model_path;      // load a forest dump
  std::vector<std::string> external_command;  // or bridge to a child process
  ForestConfig forest;                        // or train in-process (needs labels)
  std::optional<std::string> model_out;

  std::optional<std::string> graph_path;  // knowledge graph; complete when absent

  CounterfactualPolicy policy = CounterfactualPolicy::stochastic();
  std::size_t n_iter = 1000;
  std::size_t k = 4;
  std::uint64_t seed = 0;
  int threads = 0;

  StationaryOptions stationary;
  bool adjacent_fraction = false;  // also report the in+out fraction variant

  std::optional<std::string> report_out;
  std::optional<std::string> dot_out;
  std::optional<std::string> paths_out;
};

nlohmann::json explain_config_to_json(const ExplainConfig& config);
ExplainConfig explain_config_from_json(const nlohmann::json& doc);

struct ExplainReport {
  nlohmann::json document;
  bool empty_paths = false;  // run finished but no path triggered (CLI exit 4)
  PathSet paths;
  std::optional<ImportanceVector> fraction;
  std::optional<ImportanceVector> stationary;
};

/// Full explain pipeline: load data, build/load the model and graph, sample
/// counterfactual paths, aggregate the transition matrix, compute both
/// importance estimators, and write the requested artifacts. On an empty
/// path set the report is still written, with diagnostics instead of scores.
ExplainReport run_explain(const ExplainConfig& config);

/// 64-bit FNV-1a, hex-encoded; used for config hashes and model fingerprints.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace cpath
