#include "cpath/explain.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <memory>

#include "cpath/bridge.hpp"
#include "cpath/errors.hpp"
#include "cpath/export.hpp"

namespace cpath {

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

nlohmann::json explain_config_to_json(const ExplainConfig& c) {
  nlohmann::json doc;
  doc["data_path"] = c.data_path;
  doc["has_header"] = c.has_header;
  doc["label_column"] = c.label_column ? nlohmann::json(*c.label_column) : nlohmann::json();
  doc["model_path"] = c.model_path ? nlohmann::json(*c.model_path) : nlohmann::json();
  doc["external_command"] = c.external_command;
  doc["forest"] = {{"n_trees", c.forest.n_trees}, {"max_depth", c.forest.max_depth},
                   {"mtry", c.forest.mtry},       {"min_leaf", c.forest.min_leaf},
                   {"seed", c.forest.seed}};
  doc["model_out"] = c.model_out ? nlohmann::json(*c.model_out) : nlohmann::json();
  doc["graph_path"] = c.graph_path ? nlohmann::json(*c.graph_path) : nlohmann::json();
  doc["policy"] = c.policy.to_string();
  doc["n_iter"] = c.n_iter;
  doc["k"] = c.k;
  doc["seed"] = c.seed;
  doc["threads"] = c.threads;
  doc["stationary"] = {{"damping", c.stationary.damping},
                       {"tol", c.stationary.tol},
                       {"max_iters", c.stationary.max_iters}};
  doc["adjacent_fraction"] = c.adjacent_fraction;
  doc["report_out"] = c.report_out ? nlohmann::json(*c.report_out) : nlohmann::json();
  doc["dot_out"] = c.dot_out ? nlohmann::json(*c.dot_out) : nlohmann::json();
  doc["paths_out"] = c.paths_out ? nlohmann::json(*c.paths_out) : nlohmann::json();
  return doc;
}

ExplainConfig explain_config_from_json(const nlohmann::json& doc) {
  auto opt_string = [&](const char* key) -> std::optional<std::string> {
    if (!doc.contains(key) || doc.at(key).is_null()) return std::nullopt;
    return doc.at(key).get<std::string>();
  };
  try {
    ExplainConfig c;
    c.data_path = doc.at("data_path").get<std::string>();
    c.has_header = doc.at("has_header").get<bool>();
    c.label_column = opt_string("label_column");
    c.model_path = opt_string("model_path");
    c.external_command = doc.at("external_command").get<std::vector<std::string>>();
    const auto& jf = doc.at("forest");
    c.forest.n_trees = jf.at("n_trees").get<int>();
    c.forest.max_depth = jf.at("max_depth").get<int>();
    c.forest.mtry = jf.at("mtry").get<int>();
    c.forest.min_leaf = jf.at("min_leaf").get<int>();
    c.forest.seed = jf.at("seed").get<std::uint64_t>();
    c.model_out = opt_string("model_out");
    c.graph_path = opt_string("graph_path");
    c.policy = CounterfactualPolicy::parse(doc.at("policy").get<std::string>());
    c.n_iter = doc.at("n_iter").get<std::size_t>();
    c.k = doc.at("k").get<std::size_t>();
    c.seed = doc.at("seed").get<std::uint64_t>();
    c.threads = doc.at("threads").get<int>();
    const auto& js = doc.at("stationary");
    c.stationary.damping = js.at("damping").get<double>();
    c.stationary.tol = js.at("tol").get<double>();
    c.stationary.max_iters = js.at("max_iters").get<int>();
    c.adjacent_fraction = doc.at("adjacent_fraction").get<bool>();
    c.report_out = opt_string("report_out");
    c.dot_out = opt_string("dot_out");
    c.paths_out = opt_string("paths_out");
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("replay", std::string("malformed provenance config: ") + e.what());
  }
}

namespace {

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text_file(const std::string& path, const std::string& text, const char* stage) {
  std::ofstream out(path);
  if (!out) throw ConfigError(stage, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw ConfigError(stage, "write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path, const char* stage) {
  std::ifstream in(path);
  if (!in) throw ConfigError(stage, "cannot open '" + path + "'");
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return text;
}

}  // namespace

ExplainReport run_explain(const ExplainConfig& config) {
  // Stage: load-data
  const LoadedCsv loaded = load_csv(config.data_path, config.has_header, config.label_column);
  const Dataset& data = loaded.data;

  // Stage: model
  std::unique_ptr<BlackBoxModel> owned_model;
  std::string fingerprint;
  if (!config.external_command.empty()) {
    owned_model = spawn_external_model(config.external_command);
    std::string joined;
    for (const auto& a : config.external_command) joined += a + " ";
    fingerprint = "external:" + fnv1a_hex(joined);
  } else if (config.model_path) {
    auto forest = std::make_unique<RandomForest>(
        RandomForest::from_json(read_text_file(*config.model_path, "model")));
    fingerprint = "forest:" + fnv1a_hex(forest->to_json());
    owned_model = std::move(forest);
  } else {
    if (!loaded.labels)
      throw ConfigError("model", "no model given and no label column to train on");
    auto forest = std::make_unique<RandomForest>(
        train_random_forest(data, *loaded.labels, config.forest, config.threads));
    fingerprint = "forest:" + fnv1a_hex(forest->to_json());
    if (config.model_out) write_text_file(*config.model_out, forest->to_json(), "model");
    owned_model = std::move(forest);
  }
  const BlackBoxModel& model = *owned_model;

  // Stage: graph
  const FeatureGraph graph = config.graph_path
                                 ? load_knowledge_graph(*config.graph_path, data.columns())
                                 : complete_graph(data.cols());

  // Stage: pathgen
  PathSet paths = generate_paths(model, data, config.policy, graph, config.n_iter, config.k,
                                 config.seed, config.threads);

  ExplainReport report;
  report.empty_paths = paths.paths.empty();

  nlohmann::json doc;
  doc["schema"] = "cpath-report/1";
  doc["generated_at"] = iso_timestamp();
  const nlohmann::json config_json = explain_config_to_json(config);
  doc["provenance"] = {{"config", config_json},
                       {"config_hash", fnv1a_hex(config_json.dump())},
                       {"model_fingerprint", fingerprint},
                       {"seed", config.seed}};
  doc["columns"] = data.columns();
  doc["n_iter"] = paths.n_iter;
  doc["k"] = paths.k;
  doc["policy"] = config.policy.to_string();

  std::vector<std::size_t> histogram(config.k, 0);
  double final_swap_sum = 0.0;
  for (const auto& path : paths.paths) {
    histogram[path.vertices.size() - 1]++;
    final_swap_sum += path.swap_trace.back();
  }
  doc["path_summary"] = {
      {"stored", paths.paths.size()},
      {"untriggered", paths.untriggered},
      {"length_histogram", histogram},
      {"mean_final_swap_fraction",
       paths.paths.empty() ? nlohmann::json() : nlohmann::json(final_swap_sum / paths.paths.size())}};

  if (report.empty_paths) {
    doc["status"] = "empty";
    doc["diagnostics"] =
        "no counterfactual paths triggered: the model may ignore all features, the policy "
        "may be too strict (threshold kappa too high), or n_iter/k too small";
  } else {
    doc["status"] = "ok";
    const TransitionMatrix matrix = build_transition_matrix(paths);
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < matrix.p; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t j = 0; j < matrix.p; ++j) row.push_back(matrix.at(i, j));
      rows.push_back(std::move(row));
    }
    doc["transition_matrix"] = std::move(rows);

    report.fraction = importance_fraction(matrix);
    StationaryStats stats;
    report.stationary = importance_stationary(matrix, config.stationary, &stats);
    doc["importance"] = {{"fraction", report.fraction->scores},
                         {"stationary", report.stationary->scores},
                         {"stationary_residual", stats.residual},
                         {"stationary_iterations", stats.iterations}};
    if (config.adjacent_fraction)
      doc["importance"]["fraction_adjacent"] =
          importance_fraction(matrix, EdgeAggregation::kInOut).scores;

    if (config.dot_out)
      write_text_file(*config.dot_out, export_dot(matrix, *report.fraction, data.columns()),
                      "export");
  }

  if (config.paths_out)
    write_text_file(*config.paths_out, export_paths_json(paths, data.columns()), "export");

  report.document = std::move(doc);
  report.paths = std::move(paths);
  if (config.report_out)
    write_text_file(*config.report_out, report.document.dump(2) + "\n", "report");
  return report;
}

}  // namespace cpath
