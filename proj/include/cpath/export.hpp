#pragma once

#include <string>
#include <vector>

#include "cpath/importance.hpp"
#include "cpath/pathgen.hpp"

namespace cpath {

/// Graphviz rendition of the transition matrix: nodes labelled
/// "name (score)" with three decimals, integer edge weights, zero-weight
/// edges omitted. Node and edge order is stable (index, then lexicographic).
std::string export_dot(const TransitionMatrix& matrix, const ImportanceVector& importance,
                       const std::vector<std::string>& names);

/// PathSet as versioned JSON ("cpath-paths/1"), the interchange format for
/// external tooling (e.g. Bayesian-network learners consuming path
/// co-occurrence). Numbers round-trip losslessly.
std::string export_paths_json(const PathSet& paths, const std::vector<std::string>& names);

/// Inverse of export_paths_json.
PathSet parse_paths_json(const std::string& text);

}  // namespace cpath
