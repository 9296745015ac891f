#include "cpath/feature_graph.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "cpath/errors.hpp"

namespace cpath {

bool FeatureGraph::has_edge(std::size_t from, std::size_t to) const {
  if (from >= p || to >= p) return false;
  if (mode == Mode::kComplete) return from != to;
  const auto& out = adjacency[from];
  return std::find(out.begin(), out.end(), to) != out.end();
}

std::size_t FeatureGraph::out_degree(std::size_t v) const {
  if (mode == Mode::kComplete) return p - 1;
  return adjacency[v].size();
}

FeatureGraph complete_graph(std::size_t p) {
  if (p == 0) throw ConfigError("graph", "complete graph needs at least one vertex");
  return FeatureGraph{p, FeatureGraph::Mode::kComplete, {}};
}

FeatureGraph knowledge_graph(const std::vector<std::pair<std::string, std::string>>& edges,
                             const std::vector<std::string>& columns) {
  if (edges.empty()) throw ConfigError("graph", "knowledge graph has no edges");

  std::map<std::string, std::size_t> index;
  for (std::size_t j = 0; j < columns.size(); ++j) index[columns[j]] = j;

  std::set<std::pair<std::size_t, std::size_t>> arcs;
  for (const auto& [a, b] : edges) {
    const auto ia = index.find(a);
    const auto ib = index.find(b);
    if (ia == index.end()) throw ConfigError("graph", "edge names unknown feature '" + a + "'");
    if (ib == index.end()) throw ConfigError("graph", "edge names unknown feature '" + b + "'");
    if (ia->second == ib->second)
      throw ConfigError("graph", "self-loop on feature '" + a + "' not allowed");
    arcs.emplace(ia->second, ib->second);
    arcs.emplace(ib->second, ia->second);
  }

  FeatureGraph graph{columns.size(), FeatureGraph::Mode::kKnowledge, {}};
  graph.adjacency.assign(columns.size(), {});
  for (const auto& [from, to] : arcs) graph.adjacency[from].push_back(to);
  return graph;
}

FeatureGraph load_knowledge_graph(const std::string& path,
                                  const std::vector<std::string>& columns) {
  std::ifstream in(path);
  if (!in) throw ConfigError("graph", "cannot open '" + path + "'");

  std::vector<std::pair<std::string, std::string>> edges;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first && line == "source,target") {
      first = false;
      continue;
    }
    first = false;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
      throw ConfigError("graph", "edge line '" + line + "' is not 'source,target'");
    edges.emplace_back(line.substr(0, comma), line.substr(comma + 1));
  }
  return knowledge_graph(edges, columns);
}

void write_edge_list_csv(const std::string& path, const FeatureGraph& graph,
                         const std::vector<std::string>& columns) {
  if (columns.size() != graph.p) throw ConfigError("graph", "column count does not match graph");
  std::ofstream out(path);
  if (!out) throw ConfigError("graph", "cannot open '" + path + "' for writing");
  out << "source,target\n";
  for (const auto& [a, b] : undirected_edges(graph)) out << columns[a] << ',' << columns[b] << '\n';
}

std::size_t sample_start_vertex(const FeatureGraph& graph, Rng& rng) {
  return rng.below(graph.p);
}

std::optional<std::size_t> sample_next_vertex(const FeatureGraph& graph, std::size_t current,
                                              const std::vector<bool>& visited, Rng& rng) {
  if (graph.mode == FeatureGraph::Mode::kComplete) {
    // Without replacement: re-permuting a column is a distributional no-op.
    std::size_t n_open = 0;
    for (std::size_t v = 0; v < graph.p; ++v)
      if (!visited[v]) ++n_open;
    if (n_open == 0) return std::nullopt;
    std::size_t pick = rng.below(n_open);
    for (std::size_t v = 0; v < graph.p; ++v) {
      if (visited[v]) continue;
      if (pick == 0) return v;
      --pick;
    }
    return std::nullopt;  // unreachable
  }

  const auto& out = graph.adjacency[current];
  if (out.empty()) return std::nullopt;
  return out[rng.below(out.size())];  // revisits allowed
}

FeatureGraph barabasi_graph(std::size_t n_vertices, std::size_t m, Rng& rng) {
  if (m < 1 || n_vertices <= m)
    throw ConfigError("graph", "barabasi requires n_vertices > m >= 1");

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::size_t> endpoints;  // one entry per edge endpoint => degree-biased draws

  // Seed clique on vertices 0..m.
  for (std::size_t i = 0; i <= m; ++i)
    for (std::size_t j = i + 1; j <= m; ++j) {
      edges.emplace_back(i, j);
      endpoints.push_back(i);
      endpoints.push_back(j);
    }

  for (std::size_t v = m + 1; v < n_vertices; ++v) {
    std::set<std::size_t> targets;
    while (targets.size() < m) {
      const std::size_t t = endpoints[rng.below(endpoints.size())];
      targets.insert(t);  // duplicate edges within a step rejected via set
    }
    for (const std::size_t t : targets) {
      edges.emplace_back(t, v);
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }

  FeatureGraph graph{n_vertices, FeatureGraph::Mode::kKnowledge, {}};
  graph.adjacency.assign(n_vertices, {});
  for (const auto& [a, b] : edges) {
    graph.adjacency[a].push_back(b);
    graph.adjacency[b].push_back(a);
  }
  for (auto& out : graph.adjacency) std::sort(out.begin(), out.end());
  return graph;
}

std::vector<std::pair<std::size_t, std::size_t>> undirected_edges(const FeatureGraph& graph) {
  std::set<std::pair<std::size_t, std::size_t>> seen;
  if (graph.mode == FeatureGraph::Mode::kComplete) {
    for (std::size_t i = 0; i < graph.p; ++i)
      for (std::size_t j = i + 1; j < graph.p; ++j) seen.emplace(i, j);
  } else {
    for (std::size_t i = 0; i < graph.p; ++i)
      for (const std::size_t j : graph.adjacency[i])
        seen.emplace(std::min(i, j), std::max(i, j));
  }
  return {seen.begin(), seen.end()};
}

std::size_t graph_diameter(const FeatureGraph& graph) {
  if (graph.mode == FeatureGraph::Mode::kComplete) return graph.p > 1 ? 1 : 0;

  std::size_t diameter = 0;
  std::vector<std::size_t> dist(graph.p);
  for (std::size_t source = 0; source < graph.p; ++source) {
    std::fill(dist.begin(), dist.end(), graph.p + 1);
    std::deque<std::size_t> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      for (const std::size_t w : graph.adjacency[u])
        if (dist[w] > dist[u] + 1) {
          dist[w] = dist[u] + 1;
          queue.push_back(w);
        }
    }
    for (std::size_t v = 0; v < graph.p; ++v)
      if (dist[v] <= graph.p) diameter = std::max(diameter, dist[v]);
  }
  return diameter;
}

}  // namespace cpath
