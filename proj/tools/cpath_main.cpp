#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cpath/errors.hpp"
#include "cpath/explain.hpp"
#include "cpath/export.hpp"
#include "cpath/importance.hpp"
#include "cpath/metrics.hpp"
#include "cpath/pipeline.hpp"
#include "cpath/simgen.hpp"

namespace {

using nlohmann::json;

void write_json_file(const std::string& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw cpath::ConfigError("report", "cannot open '" + path + "' for writing");
  out << doc.dump(2) << '\n';
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string scenario = "cond-dep-1";
  std::size_t rows = 100;
  std::size_t noise = 2;
  std::uint64_t seed = 0;
  std::size_t vertices = 10;
  std::size_t m = 1;
  std::string out;
  std::string graph_out;
  std::string meta_out;
};

int run_simulate(const SimulateArgs& args) {
  cpath::SimConfig config;
  config.scenario = cpath::parse_scenario(args.scenario);
  config.n = args.rows;
  config.n_noise = args.noise;
  config.seed = args.seed;
  config.n_vertices = args.vertices;
  config.m = args.m;

  const cpath::SimOutput sim = cpath::simulate(config);
  cpath::write_csv(args.out, sim.dataset, &sim.labels, "y");

  if (!args.graph_out.empty()) {
    if (!sim.graph)
      throw cpath::ConfigError("simulate", "--graph-out only applies to the barabasi scenario");
    cpath::write_edge_list_csv(args.graph_out, *sim.graph, sim.dataset.columns());
  }

  json meta;
  meta["schema"] = "cpath-sim-meta/1";
  meta["scenario"] = args.scenario;
  meta["seed"] = args.seed;
  meta["rows"] = sim.dataset.rows();
  meta["signal_features"] = sim.signal_features;
  json names = json::array();
  for (const auto f : sim.signal_features) names.push_back(sim.dataset.columns()[f]);
  meta["signal_names"] = std::move(names);
  const std::string meta_path = args.meta_out.empty() ? args.out + ".meta.json" : args.meta_out;
  write_json_file(meta_path, meta);

  std::cout << "wrote " << sim.dataset.rows() << " rows x " << sim.dataset.cols()
            << " features to " << args.out << " (signal:";
  for (const auto f : sim.signal_features) std::cout << ' ' << sim.dataset.columns()[f];
  std::cout << ")\n";
  return 0;
}

// ----------------------------------------------------------------- explain

struct ExplainArgs {
  cpath::ExplainConfig config;
  std::string policy = "stochastic";
  std::string label_column;
  std::string model_path;
  std::string model_out;
  std::string external;
  std::string graph_path;
  std::string report_out;
  std::string dot_out;
  std::string paths_out;
  std::string replay;
  bool no_header = false;
};

int run_explain_cmd(ExplainArgs& args) {
  cpath::ExplainConfig config;
  if (!args.replay.empty()) {
    std::ifstream in(args.replay);
    if (!in) throw cpath::ConfigError("replay", "cannot open '" + args.replay + "'");
    json doc;
    try {
      in >> doc;
    } catch (const json::exception& e) {
      throw cpath::ConfigError("replay", std::string("invalid report JSON: ") + e.what());
    }
    if (!doc.contains("provenance") || !doc["provenance"].contains("config"))
      throw cpath::ConfigError("replay", "report lacks a provenance.config block");
    config = cpath::explain_config_from_json(doc["provenance"]["config"]);
  } else {
    config = args.config;
    config.has_header = !args.no_header;
    config.policy = cpath::CounterfactualPolicy::parse(args.policy);
    if (!args.label_column.empty()) config.label_column = args.label_column;
    if (!args.model_path.empty()) config.model_path = args.model_path;
    if (!args.model_out.empty()) config.model_out = args.model_out;
    if (!args.external.empty()) {
      std::stringstream ss(args.external);
      std::string piece;
      while (ss >> piece) config.external_command.push_back(piece);
    }
    if (!args.graph_path.empty()) config.graph_path = args.graph_path;
    if (!args.report_out.empty()) config.report_out = args.report_out;
    if (!args.dot_out.empty()) config.dot_out = args.dot_out;
    if (!args.paths_out.empty()) config.paths_out = args.paths_out;
  }

  const cpath::ExplainReport report = cpath::run_explain(config);

  if (report.empty_paths) {
    std::cerr << "no counterfactual paths found; see the report diagnostics\n";
    if (config.report_out) std::cerr << "report written to " << *config.report_out << '\n';
    return 4;
  }

  const auto& columns = report.document["columns"];
  std::cout << "paths stored: " << report.paths.paths.size() << " / " << report.paths.n_iter
            << " iterations\n";
  std::cout << "importance (fraction | stationary):\n";
  for (std::size_t j = 0; j < report.fraction->scores.size(); ++j)
    std::printf("  %-16s %.4f | %.4f\n", columns[j].get<std::string>().c_str(),
                report.fraction->scores[j], report.stationary->scores[j]);
  if (config.report_out) std::cout << "report written to " << *config.report_out << '\n';
  return 0;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string data_path;
  bool no_header = false;
  std::string label_column = "y";
  std::string explainer = "cpath";
  std::string metric = "correlation";
  int repeats = 1;
  std::uint64_t seed = 0;
  std::string out;
  std::string signal;     // "0,1" feature indices
  std::string meta_path;  // or a simulate sidecar
  std::string policy = "stochastic";
  std::size_t n_iter = 1000;
  std::size_t k = 4;
  int pfi_repeats = 10;
  std::size_t samples = 64;
  double sigma = 0.1;
  cpath::ForestConfig forest;
};

std::vector<std::size_t> parse_signal_features(const EvaluateArgs& args) {
  std::vector<std::size_t> signal;
  if (!args.signal.empty()) {
    std::stringstream ss(args.signal);
    std::string piece;
    while (std::getline(ss, piece, ','))
      signal.push_back(static_cast<std::size_t>(std::stoul(piece)));
  } else if (!args.meta_path.empty()) {
    std::ifstream in(args.meta_path);
    if (!in) throw cpath::ConfigError("evaluate", "cannot open '" + args.meta_path + "'");
    json meta;
    try {
      in >> meta;
      signal = meta.at("signal_features").get<std::vector<std::size_t>>();
    } catch (const json::exception& e) {
      throw cpath::ConfigError("evaluate", std::string("bad meta file: ") + e.what());
    }
  }
  return signal;
}

int run_evaluate(const EvaluateArgs& args) {
  const cpath::LoadedCsv loaded = cpath::load_csv(args.data_path, !args.no_header,
                                                  args.label_column);
  if (!loaded.labels) throw cpath::ConfigError("evaluate", "a label column is required");
  const cpath::Dataset& data = loaded.data;
  const cpath::LabelVector& labels = *loaded.labels;

  const auto policy = cpath::CounterfactualPolicy::parse(args.policy);
  const auto signal = parse_signal_features(args);

  std::size_t sensitivity_subset = 0;
  std::string metric = args.metric;
  if (metric.rfind("sensitivity:", 0) == 0) {
    sensitivity_subset = std::stoul(metric.substr(12));
    metric = "sensitivity";
  }
  if (metric == "coverage" && signal.empty())
    throw cpath::ConfigError("evaluate", "coverage needs --signal or --meta");

  std::vector<double> per_seed;
  for (int r = 0; r < args.repeats; ++r) {
    const std::uint64_t rseed = cpath::Rng::derive(args.seed, static_cast<std::uint64_t>(r));
    cpath::ForestConfig fc = args.forest;
    fc.seed = cpath::Rng::derive(rseed, 0);
    const cpath::RandomForest forest = cpath::train_random_forest(data, labels, fc);
    const cpath::ExplanationScores gini{cpath::gini_importance(forest),
                                        cpath::ScoreSource::kGini};

    cpath::ExplanationScores scores;
    if (args.explainer == "gini") {
      scores = gini;
    } else if (args.explainer == "pfi") {
      scores = cpath::pfi(forest, data, labels, args.pfi_repeats, cpath::Rng::derive(rseed, 1));
    } else if (args.explainer == "cpath") {
      const auto graph = cpath::complete_graph(data.cols());
      const auto paths = cpath::generate_paths(forest, data, policy, graph, args.n_iter, args.k,
                                               cpath::Rng::derive(rseed, 2));
      if (paths.paths.empty())
        throw cpath::EmptyResultError("evaluate", "repeat " + std::to_string(r) +
                                                      " produced no counterfactual paths");
      scores = cpath::ExplanationScores{
          cpath::importance_fraction(cpath::build_transition_matrix(paths)).scores,
          cpath::ScoreSource::kCpathFraction};
    } else {
      throw cpath::ConfigError("evaluate", "unknown explainer '" + args.explainer + "'");
    }

    double value = 0.0;
    if (metric == "correlation") {
      value = cpath::rank_correlation(scores, gini);
    } else if (metric == "coverage") {
      value = cpath::coverage(scores, signal);
    } else if (metric == "sensitivity") {
      value = cpath::sensitivity_n(forest, data, scores, sensitivity_subset, args.samples,
                                   cpath::Rng::derive(rseed, 3));
    } else if (metric == "infidelity") {
      cpath::InfidelityConfig ic;
      ic.sigma = args.sigma;
      ic.n_samples = args.samples;
      ic.seed = cpath::Rng::derive(rseed, 4);
      value = cpath::infidelity(forest, data, scores, ic).value;
    } else {
      throw cpath::ConfigError("evaluate", "unknown metric '" + args.metric + "'");
    }
    per_seed.push_back(value);
  }

  const cpath::Summary summary = cpath::summarize(per_seed);
  json doc;
  doc["schema"] = "cpath-eval/1";
  doc["data"] = args.data_path;
  doc["explainer"] = args.explainer;
  doc["metric"] = args.metric;
  doc["repeats"] = args.repeats;
  doc["seed"] = args.seed;
  doc["per_seed"] = per_seed;
  doc["summary"] = {{"min", summary.min}, {"mean", summary.mean}, {"max", summary.max}};
  if (!args.out.empty()) write_json_file(args.out, doc);

  std::printf("%s %s: min/mean/max = %.3f/%.3f/%.3f over %d repeats\n", args.explainer.c_str(),
              args.metric.c_str(), summary.min, summary.mean, summary.max, args.repeats);
  return 0;
}

// ---------------------------------------------------------------- pipeline

struct PipelineArgs {
  std::string scenario = "cond-dep-1";
  std::size_t rows = 100;
  std::size_t noise = 2;
  std::size_t seeds = 50;
  std::uint64_t seed = 1;
  std::size_t n_iter = 1000;
  std::size_t k = 4;
  std::string policy = "stochastic";
  int pfi_repeats = 10;
  std::size_t vertices = 10;
  std::size_t m = 1;
  bool knowledge = false;
  std::string out;
  cpath::ForestConfig forest;
};

int run_pipeline_cmd(const PipelineArgs& args) {
  cpath::PipelineConfig config;
  config.scenario = cpath::parse_scenario(args.scenario);
  config.rows = args.rows;
  config.n_noise = args.noise;
  config.n_seeds = args.seeds;
  config.base_seed = args.seed;
  config.forest = args.forest;
  config.policy = cpath::CounterfactualPolicy::parse(args.policy);
  config.n_iter = args.n_iter;
  config.k = args.k;
  config.pfi_repeats = args.pfi_repeats;
  config.n_vertices = args.vertices;
  config.m = args.m;
  config.walk_knowledge_graph = args.knowledge;

  const cpath::PipelineResult result = cpath::run_pipeline(config);

  auto block = [&](double cpath::PipelineRun::* field) {
    const cpath::Summary s = cpath::summarize(result.collect(field));
    return json{{"min", s.min}, {"mean", s.mean}, {"max", s.max}};
  };

  json doc;
  doc["schema"] = "cpath-pipeline/1";
  doc["scenario"] = args.scenario;
  doc["rows"] = args.rows;
  doc["noise"] = args.noise;
  doc["seeds"] = args.seeds;
  doc["base_seed"] = args.seed;
  doc["n_iter"] = args.n_iter;
  doc["k"] = args.k;
  doc["coverage"] = {{"cpath_fraction", block(&cpath::PipelineRun::coverage_cpath_fraction)},
                     {"cpath_stationary", block(&cpath::PipelineRun::coverage_cpath_stationary)},
                     {"gini", block(&cpath::PipelineRun::coverage_gini)},
                     {"pfi", block(&cpath::PipelineRun::coverage_pfi)}};
  doc["correlation_to_gini"] = {{"cpath", block(&cpath::PipelineRun::spearman_cpath_gini)},
                                {"pfi", block(&cpath::PipelineRun::spearman_pfi_gini)}};
  json runs = json::array();
  for (const auto& run : result.runs)
    runs.push_back({{"coverage_cpath_fraction", run.coverage_cpath_fraction},
                    {"coverage_cpath_stationary", run.coverage_cpath_stationary},
                    {"coverage_gini", run.coverage_gini},
                    {"coverage_pfi", run.coverage_pfi},
                    {"spearman_cpath_gini", run.spearman_cpath_gini},
                    {"spearman_pfi_gini", run.spearman_pfi_gini},
                    {"stored_paths", run.stored_paths}});
  doc["runs"] = std::move(runs);
  if (!args.out.empty()) write_json_file(args.out, doc);

  const auto cov = cpath::summarize(result.collect(&cpath::PipelineRun::coverage_cpath_fraction));
  const auto cor = cpath::summarize(result.collect(&cpath::PipelineRun::spearman_cpath_gini));
  std::printf("%s over %zu seeds: cpath coverage mean %.3f, cpath-gini spearman %.3f\n",
              args.scenario.c_str(), args.seeds, cov.mean, cor.mean);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cpath: global feature importance from counterfactual paths"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "generate a synthetic benchmark dataset");
  sim_cmd->add_option("--scenario", sim.scenario,
                      "cond-dep-1|cond-dep-2|correlation|cond-indep|barabasi");
  sim_cmd->add_option("--rows", sim.rows, "rows to generate");
  sim_cmd->add_option("--noise", sim.noise, "noise feature count (scenarios 1-4)");
  sim_cmd->add_option("--seed", sim.seed, "rng seed");
  sim_cmd->add_option("--vertices", sim.vertices, "barabasi vertex count");
  sim_cmd->add_option("--m", sim.m, "barabasi edges per new vertex");
  sim_cmd->add_option("--out", sim.out, "output CSV path")->required();
  sim_cmd->add_option("--graph-out", sim.graph_out, "edge-list CSV (barabasi)");
  sim_cmd->add_option("--meta-out", sim.meta_out, "sidecar JSON path (default <out>.meta.json)");

  ExplainArgs exp;
  auto* exp_cmd = app.add_subcommand("explain", "sample counterfactual paths and rank features");
  exp_cmd->add_option("--data", exp.config.data_path, "input CSV");
  exp_cmd->add_flag("--no-header", exp.no_header, "CSV has no header row");
  exp_cmd->add_option("--labels", exp.label_column, "label column name (to train the forest)");
  exp_cmd->add_option("--model", exp.model_path, "load a forest dump instead of training");
  exp_cmd->add_option("--model-out", exp.model_out, "write the trained forest dump");
  exp_cmd->add_option("--external-cmd", exp.external,
                      "external model command speaking the cpath line protocol");
  exp_cmd->add_option("--graph", exp.graph_path, "knowledge-graph edge list CSV");
  exp_cmd->add_option("--policy", exp.policy, "stochastic (default) or threshold:<kappa>");
  exp_cmd->add_option("--n-iter", exp.config.n_iter, "sampling iterations");
  exp_cmd->add_option("-k,--max-length", exp.config.k, "maximum path length");
  exp_cmd->add_option("--seed", exp.config.seed, "rng seed");
  exp_cmd->add_option("--threads", exp.config.threads, "worker threads (0 = auto)");
  exp_cmd->add_option("--damping", exp.config.stationary.damping, "stationary teleport weight");
  exp_cmd->add_flag("--adjacent-fraction", exp.config.adjacent_fraction,
                    "also report the in+out fraction variant");
  exp_cmd->add_option("--trees", exp.config.forest.n_trees, "forest size when training");
  exp_cmd->add_option("--mtry", exp.config.forest.mtry, "features per split (0 = ceil(sqrt(p)))");
  exp_cmd->add_option("--max-depth", exp.config.forest.max_depth, "tree depth cap (0 = none)");
  exp_cmd->add_option("--min-leaf", exp.config.forest.min_leaf, "minimum samples per leaf");
  exp_cmd->add_option("--forest-seed", exp.config.forest.seed, "training seed (default: --seed)");
  exp_cmd->add_option("--out", exp.report_out, "report JSON path");
  exp_cmd->add_option("--dot-out", exp.dot_out, "transition-graph DOT path");
  exp_cmd->add_option("--paths-out", exp.paths_out, "path-set JSON path");
  exp_cmd->add_option("--replay", exp.replay, "re-run from a report's provenance block");

  EvaluateArgs eva;
  auto* eva_cmd = app.add_subcommand("evaluate", "score an explainer against a metric");
  eva_cmd->add_option("--data", eva.data_path, "input CSV")->required();
  eva_cmd->add_flag("--no-header", eva.no_header, "CSV has no header row");
  eva_cmd->add_option("--labels", eva.label_column, "label column name");
  eva_cmd->add_option("--explainer", eva.explainer, "cpath|pfi|gini");
  eva_cmd->add_option("--metric", eva.metric,
                      "correlation|coverage|sensitivity:<n>|infidelity");
  eva_cmd->add_option("--repeats", eva.repeats, "independent repeats");
  eva_cmd->add_option("--seed", eva.seed, "rng seed");
  eva_cmd->add_option("--signal", eva.signal, "signal feature indices, e.g. 0,1");
  eva_cmd->add_option("--meta", eva.meta_path, "simulate sidecar JSON with signal_features");
  eva_cmd->add_option("--policy", eva.policy, "counterfactual policy");
  eva_cmd->add_option("--n-iter", eva.n_iter, "cpath sampling iterations");
  eva_cmd->add_option("-k,--max-length", eva.k, "cpath maximum path length");
  eva_cmd->add_option("--pfi-repeats", eva.pfi_repeats, "pfi permutation repeats");
  eva_cmd->add_option("--samples", eva.samples, "sensitivity/infidelity Monte Carlo samples");
  eva_cmd->add_option("--sigma", eva.sigma, "infidelity gaussian sigma");
  eva_cmd->add_option("--trees", eva.forest.n_trees, "forest size");
  eva_cmd->add_option("--out", eva.out, "report JSON path");

  PipelineArgs pipe;
  auto* pipe_cmd = app.add_subcommand("pipeline",
                                      "simulate -> train -> explain -> evaluate sweep");
  pipe_cmd->add_option("--scenario", pipe.scenario, "synthetic scenario");
  pipe_cmd->add_option("--rows", pipe.rows, "rows per dataset");
  pipe_cmd->add_option("--noise", pipe.noise, "noise feature count");
  pipe_cmd->add_option("--seeds", pipe.seeds, "number of simulation seeds");
  pipe_cmd->add_option("--seed", pipe.seed, "base seed");
  pipe_cmd->add_option("--n-iter", pipe.n_iter, "sampling iterations");
  pipe_cmd->add_option("-k,--max-length", pipe.k, "maximum path length");
  pipe_cmd->add_option("--policy", pipe.policy, "counterfactual policy");
  pipe_cmd->add_option("--pfi-repeats", pipe.pfi_repeats, "pfi permutation repeats");
  pipe_cmd->add_option("--vertices", pipe.vertices, "barabasi vertex count");
  pipe_cmd->add_option("--m", pipe.m, "barabasi edges per new vertex");
  pipe_cmd->add_flag("--knowledge", pipe.knowledge, "walk the generated knowledge graph");
  pipe_cmd->add_option("--trees", pipe.forest.n_trees, "forest size");
  pipe_cmd->add_option("--out", pipe.out, "report JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sim_cmd->parsed()) return run_simulate(sim);
    if (exp_cmd->parsed()) {
      // The run seed doubles as the training seed unless one was given.
      if (exp_cmd->count("--forest-seed") == 0) exp.config.forest.seed = exp.config.seed;
      return run_explain_cmd(exp);
    }
    if (eva_cmd->parsed()) return run_evaluate(eva);
    if (pipe_cmd->parsed()) return run_pipeline_cmd(pipe);
  } catch (const cpath::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const cpath::EmptyResultError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const cpath::ModelError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
