#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cpath/blackbox.hpp"
#include "cpath/dataset.hpp"

namespace cpath {

struct ForestConfig {
  int n_trees = 500;
  int max_depth = 0;  // 0 = unbounded
  int mtry = 0;       // 0 = ceil(sqrt(p))
  int min_leaf = 1;
  std::uint64_t seed = 0;
};

/// Gini impurity 1 - sum((c_i / n)^2) of a class-count vector.
double gini_impurity(const std::vector<std::uint32_t>& counts);

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  std::vector<std::uint32_t> counts;  // bootstrap class counts, leaves only
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  int predict_row(const Dataset& data, std::size_t row) const;
};

/// CART random forest: bootstrap sampling, greedy Gini splits over mtry
/// candidate features per node, midpoint thresholds between consecutive
/// distinct values. Deterministic given (dataset, labels, config): candidate
/// features are evaluated in ascending order and gain ties resolve to the
/// lowest feature index, then the lowest threshold. Majority vote over trees,
/// ties to the lowest class id.
class RandomForest : public BlackBoxModel {
 public:
  RandomForest(std::vector<DecisionTree> trees, int n_classes, std::size_t n_features,
               ForestConfig config);

  LabelVector predict(const Dataset& data) const override;
  int n_classes() const override { return n_classes_; }
  std::size_t n_features() const override { return n_features_; }
  bool supports_concurrent_predict() const override { return true; }
  std::vector<double> class_scores(const Dataset& data,
                                   const std::vector<int>& target_class) const override;

  /// Per-row vote fraction for every class; row-major n x g.
  std::vector<double> vote_fractions(const Dataset& data) const;

  const std::vector<DecisionTree>& trees() const { return trees_; }
  const ForestConfig& config() const { return config_; }

  std::string to_json() const;
  static RandomForest from_json(const std::string& text);

 private:
  // Prediction walks a flattened copy of the trees: one contiguous node
  // arena with per-tree root offsets and precomputed leaf classes, iterated
  // tree-outer so each tree stays cache-resident across rows.
  struct FlatNode {
    double threshold;
    std::int32_t feature;  // -1 marks a leaf
    std::int32_t left;
    std::int32_t right;
    std::int32_t leaf_class;
  };

  void build_flat_nodes();
  std::vector<std::uint16_t> vote_counts(const Dataset& data) const;

  std::vector<DecisionTree> trees_;
  std::vector<FlatNode> flat_;
  std::vector<std::int32_t> roots_;
  int n_classes_ = 0;
  std::size_t n_features_ = 0;
  ForestConfig config_;
};

RandomForest train_random_forest(const Dataset& data, const LabelVector& labels,
                                 const ForestConfig& config, int threads = 0);

/// Mean decrease in Gini impurity per feature: for every split,
/// (node impurity - weighted child impurity) * node sample fraction, summed
/// per tree and averaged over trees. Features never split on score 0.
std::vector<double> gini_importance(const RandomForest& forest);

}  // namespace cpath
