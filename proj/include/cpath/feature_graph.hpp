#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cpath/rng.hpp"

namespace cpath {

/// Unweighted digraph over feature indices that masks path sampling.
///
/// Complete mode connects every ordered pair (adjacency kept implicit);
/// knowledge mode holds exactly the user-declared arcs.
struct FeatureGraph {
  enum class Mode { kComplete, kKnowledge };

  std::size_t p = 0;
  Mode mode = Mode::kComplete;
  std::vector<std::vector<std::size_t>> adjacency;  // empty in complete mode

  bool has_edge(std::size_t from, std::size_t to) const;
  std::size_t out_degree(std::size_t v) const;
};

/// Complete digraph on p >= 1 vertices.
FeatureGraph complete_graph(std::size_t p);

/// Builds a knowledge graph from undirected edges (expanded to symmetric arc
/// pairs) given by feature name. Rejects unknown names, self-loops and empty
/// edge sets.
FeatureGraph knowledge_graph(const std::vector<std::pair<std::string, std::string>>& edges,
                             const std::vector<std::string>& columns);

/// Reads a `source,target` CSV edge list (header optional, detected by a
/// first line exactly "source,target") and aligns it to the column order.
FeatureGraph load_knowledge_graph(const std::string& path,
                                  const std::vector<std::string>& columns);

/// Writes a knowledge graph back out as a `source,target` edge list with one
/// line per undirected edge.
void write_edge_list_csv(const std::string& path, const FeatureGraph& graph,
                         const std::vector<std::string>& columns);

/// Uniform start vertex over all p vertices.
std::size_t sample_start_vertex(const FeatureGraph& graph, Rng& rng);

/// One walk step. Complete mode: uniform over unvisited vertices, nullopt on
/// exhaustion. Knowledge mode: uniform over out-neighbors of `current`,
/// revisits allowed, nullopt when the walk dead-ends.
std::optional<std::size_t> sample_next_vertex(const FeatureGraph& graph, std::size_t current,
                                              const std::vector<bool>& visited, Rng& rng);

/// Barabasi-Albert preferential attachment starting from an (m+1)-clique;
/// each new vertex attaches m distinct edges biased by current degree.
/// Undirected edges are stored as symmetric arcs, knowledge mode.
FeatureGraph barabasi_graph(std::size_t n_vertices, std::size_t m, Rng& rng);

/// Undirected edge list (i < j) recovered from a symmetric adjacency.
std::vector<std::pair<std::size_t, std::size_t>> undirected_edges(const FeatureGraph& graph);

/// Longest shortest path over the undirected view; 0 for a single vertex.
std::size_t graph_diameter(const FeatureGraph& graph);

}  // namespace cpath
