#include "cpath/export.hpp"

#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "cpath/errors.hpp"

namespace cpath {

std::string export_dot(const TransitionMatrix& matrix, const ImportanceVector& importance,
                       const std::vector<std::string>& names) {
  if (names.size() != matrix.p || importance.scores.size() != matrix.p)
    throw ConfigError("export-dot", "names/importance dimensions do not match the matrix");

  std::ostringstream out;
  out << "digraph cpath {\n";
  char score[32];
  for (std::size_t v = 0; v < matrix.p; ++v) {
    std::snprintf(score, sizeof(score), "%.3f", importance.scores[v]);
    out << "  n" << v << " [label=\"" << names[v] << " (" << score << ")\"];\n";
  }
  for (std::size_t i = 0; i < matrix.p; ++i)
    for (std::size_t j = 0; j < matrix.p; ++j)
      if (matrix.at(i, j) > 0)
        out << "  n" << i << " -> n" << j << " [label=\"" << matrix.at(i, j) << "\"];\n";
  out << "}\n";
  return out.str();
}

std::string export_paths_json(const PathSet& paths, const std::vector<std::string>& names) {
  if (names.size() != paths.p)
    throw ConfigError("export-paths", "column names do not match the path set");

  nlohmann::json doc;
  doc["schema"] = "cpath-paths/1";
  doc["k"] = paths.k;
  doc["n_iter"] = paths.n_iter;
  doc["p"] = paths.p;
  doc["untriggered"] = paths.untriggered;
  doc["columns"] = names;
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& path : paths.paths)
    arr.push_back({{"vertices", path.vertices}, {"swap_trace", path.swap_trace}});
  doc["paths"] = std::move(arr);
  return doc.dump(2) + "\n";
}

PathSet parse_paths_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("parse-paths", std::string("invalid JSON: ") + e.what());
  }
  try {
    if (doc.at("schema") != "cpath-paths/1")
      throw ConfigError("parse-paths", "unknown schema tag");
    PathSet out;
    out.k = doc.at("k").get<std::size_t>();
    out.n_iter = doc.at("n_iter").get<std::size_t>();
    out.p = doc.at("p").get<std::size_t>();
    out.untriggered = doc.at("untriggered").get<std::size_t>();
    for (const auto& jp : doc.at("paths")) {
      CounterfactualPath path;
      path.vertices = jp.at("vertices").get<std::vector<std::size_t>>();
      path.swap_trace = jp.at("swap_trace").get<std::vector<double>>();
      path.triggered = true;  // only triggered paths are ever exported
      out.paths.push_back(std::move(path));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("parse-paths", std::string("malformed path document: ") + e.what());
  }
}

}  // namespace cpath
