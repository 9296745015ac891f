#include "cpath/forest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "cpath/errors.hpp"
#include "cpath/parallel.hpp"
#include "cpath/rng.hpp"

namespace cpath {

double gini_impurity(const std::vector<std::uint32_t>& counts) {
  double total = 0.0;
  for (auto c : counts) total += c;
  if (total == 0.0) return 0.0;
  double sum_sq = 0.0;
  for (auto c : counts) {
    const double q = c / total;
    sum_sq += q * q;
  }
  return 1.0 - sum_sq;
}

int DecisionTree::predict_row(const Dataset& data, std::size_t row) const {
  int idx = 0;
  while (nodes[idx].feature >= 0) {
    const double v = data.at(row, static_cast<std::size_t>(nodes[idx].feature));
    idx = v < nodes[idx].threshold ? nodes[idx].left : nodes[idx].right;
  }
  // Majority class of the leaf, ties to the lowest class id.
  const auto& counts = nodes[idx].counts;
  std::size_t best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c)
    if (counts[c] > counts[best]) best = c;
  return static_cast<int>(best) + 1;
}

namespace {

struct SplitChoice {
  bool valid = false;
  int feature = -1;
  double threshold = 0.0;
  double gain = -std::numeric_limits<double>::infinity();
};

class TreeBuilder {
 public:
  TreeBuilder(const Dataset& data, const std::vector<int>& y, int n_classes,
              const ForestConfig& cfg, int mtry, Rng rng)
      : data_(data), y_(y), g_(n_classes), cfg_(cfg), mtry_(mtry), rng_(rng) {}

  DecisionTree build() {
    const std::size_t n = data_.rows();
    sample_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      sample_[i] = static_cast<std::uint32_t>(rng_.below(n));  // bootstrap, n draws

    DecisionTree tree;
    grow(tree, 0, n, 0);
    return tree;
  }

 private:
  int grow(DecisionTree& tree, std::size_t begin, std::size_t end, int depth) {
    std::vector<std::uint32_t> counts(static_cast<std::size_t>(g_), 0);
    for (std::size_t i = begin; i < end; ++i) counts[static_cast<std::size_t>(y_[sample_[i]] - 1)]++;

    const std::size_t n_node = end - begin;
    const bool pure = std::count(counts.begin(), counts.end(), 0u) == g_ - 1;
    const bool depth_capped = cfg_.max_depth > 0 && depth >= cfg_.max_depth;
    SplitChoice split;
    if (!pure && !depth_capped && n_node >= 2 * static_cast<std::size_t>(cfg_.min_leaf))
      split = find_split(begin, end, counts);

    if (!split.valid) {
      tree.nodes.push_back(TreeNode{-1, 0.0, -1, -1, std::move(counts)});
      return static_cast<int>(tree.nodes.size()) - 1;
    }

    const auto mid = std::partition(sample_.begin() + begin, sample_.begin() + end,
                                    [&](std::uint32_t row) {
                                      return data_.at(row, static_cast<std::size_t>(split.feature)) <
                                             split.threshold;
                                    }) -
                     sample_.begin();

    const int idx = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(TreeNode{split.feature, split.threshold, -1, -1, {}});
    const int left = grow(tree, begin, static_cast<std::size_t>(mid), depth + 1);
    const int right = grow(tree, static_cast<std::size_t>(mid), end, depth + 1);
    tree.nodes[idx].left = left;
    tree.nodes[idx].right = right;
    return idx;
  }

  SplitChoice find_split(std::size_t begin, std::size_t end,
                         const std::vector<std::uint32_t>& node_counts) {
    const std::size_t p = data_.cols();
    // mtry distinct candidates via partial Fisher-Yates; evaluated in
    // ascending order so gain ties resolve to the lowest feature index.
    std::vector<std::size_t> feats(p);
    std::iota(feats.begin(), feats.end(), 0);
    for (int i = 0; i < mtry_; ++i)
      std::swap(feats[i], feats[i + rng_.below(p - static_cast<std::size_t>(i))]);
    feats.resize(static_cast<std::size_t>(mtry_));
    std::sort(feats.begin(), feats.end());

    const std::size_t n_node = end - begin;
    const double node_imp = gini_impurity(node_counts);
    SplitChoice best;

    std::vector<std::pair<double, int>> ordered;  // (value, label)
    std::vector<std::uint32_t> left(static_cast<std::size_t>(g_));
    std::vector<std::uint32_t> right(static_cast<std::size_t>(g_));
    for (const std::size_t f : feats) {
      ordered.clear();
      for (std::size_t i = begin; i < end; ++i)
        ordered.emplace_back(data_.at(sample_[i], f), y_[sample_[i]]);
      std::sort(ordered.begin(), ordered.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });

      std::fill(left.begin(), left.end(), 0u);
      for (std::size_t pos = 1; pos < n_node; ++pos) {
        left[static_cast<std::size_t>(ordered[pos - 1].second - 1)]++;
        const double lo = ordered[pos - 1].first;
        const double hi = ordered[pos].first;
        if (lo == hi) continue;  // thresholds only between distinct values
        const double thr = lo + (hi - lo) / 2.0;
        if (!(thr > lo)) continue;  // adjacent floats, midpoint collapsed

        const std::size_t n_left = pos;
        const std::size_t n_right = n_node - pos;
        if (n_left < static_cast<std::size_t>(cfg_.min_leaf) ||
            n_right < static_cast<std::size_t>(cfg_.min_leaf))
          continue;

        for (std::size_t c = 0; c < right.size(); ++c) right[c] = node_counts[c] - left[c];
        const double gain = node_imp -
                            (static_cast<double>(n_left) / n_node) * gini_impurity(left) -
                            (static_cast<double>(n_right) / n_node) * gini_impurity(right);
        if (gain > 0.0 && gain > best.gain) {
          best = SplitChoice{true, static_cast<int>(f), thr, gain};
        }
      }
    }
    return best;
  }

  const Dataset& data_;
  const std::vector<int>& y_;
  int g_;
  const ForestConfig& cfg_;
  int mtry_;
  Rng rng_;
  std::vector<std::uint32_t> sample_;
};

}  // namespace

RandomForest::RandomForest(std::vector<DecisionTree> trees, int n_classes,
                           std::size_t n_features, ForestConfig config)
    : trees_(std::move(trees)), n_classes_(n_classes), n_features_(n_features),
      config_(config) {
  if (trees_.empty()) throw ModelError("forest", "forest has no trees");
  if (trees_.size() > 65535) throw ModelError("forest", "more than 65535 trees unsupported");
  build_flat_nodes();
}

void RandomForest::build_flat_nodes() {
  std::size_t total = 0;
  for (const auto& tree : trees_) total += tree.nodes.size();
  flat_.reserve(total);
  roots_.reserve(trees_.size());
  for (const auto& tree : trees_) {
    const std::int32_t base = static_cast<std::int32_t>(flat_.size());
    roots_.push_back(base);
    for (const auto& node : tree.nodes) {
      FlatNode flat{node.threshold, node.feature, node.left + base, node.right + base, 0};
      if (node.feature < 0) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < node.counts.size(); ++c)
          if (node.counts[c] > node.counts[best]) best = c;
        flat.leaf_class = static_cast<std::int32_t>(best) + 1;
      }
      flat_.push_back(flat);
    }
  }
}

std::vector<std::uint16_t> RandomForest::vote_counts(const Dataset& data) const {
  if (data.cols() != n_features_)
    throw ModelError("predict", "dataset has " + std::to_string(data.cols()) +
                                    " columns, model expects " + std::to_string(n_features_));
  const std::size_t n = data.rows();
  const std::size_t g = static_cast<std::size_t>(n_classes_);
  const double* values = data.values().data();
  const std::size_t p = data.cols();

  std::vector<std::uint16_t> votes(n * g, 0);
  for (const std::int32_t root : roots_) {
    for (std::size_t i = 0; i < n; ++i) {
      const double* row = values + i * p;
      std::int32_t idx = root;
      while (flat_[idx].feature >= 0)
        idx = row[flat_[idx].feature] < flat_[idx].threshold ? flat_[idx].left : flat_[idx].right;
      votes[i * g + static_cast<std::size_t>(flat_[idx].leaf_class) - 1]++;
    }
  }
  return votes;
}

LabelVector RandomForest::predict(const Dataset& data) const {
  const auto votes = vote_counts(data);
  const std::size_t g = static_cast<std::size_t>(n_classes_);
  std::vector<int> out(data.rows());
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < g; ++c)
      if (votes[i * g + c] > votes[i * g + best]) best = c;
    out[i] = static_cast<int>(best) + 1;
  }
  return LabelVector(std::move(out), n_classes_);
}

std::vector<double> RandomForest::vote_fractions(const Dataset& data) const {
  const auto votes = vote_counts(data);
  std::vector<double> out(votes.size());
  for (std::size_t i = 0; i < votes.size(); ++i)
    out[i] = static_cast<double>(votes[i]) / static_cast<double>(trees_.size());
  return out;
}

std::vector<double> RandomForest::class_scores(const Dataset& data,
                                               const std::vector<int>& target_class) const {
  if (target_class.size() != data.rows())
    throw ModelError("predict", "target class vector length mismatch");
  const auto fractions = vote_fractions(data);
  const std::size_t g = static_cast<std::size_t>(n_classes_);
  std::vector<double> out(data.rows());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = fractions[i * g + static_cast<std::size_t>(target_class[i]) - 1];
  return out;
}

RandomForest train_random_forest(const Dataset& data, const LabelVector& labels,
                                 const ForestConfig& config, int threads) {
  if (labels.size() != data.rows())
    throw ModelError("train", "labels length does not match dataset rows");
  if (config.n_trees < 1) throw ModelError("train", "n_trees must be >= 1");
  if (config.min_leaf < 1) throw ModelError("train", "min_leaf must be >= 1");
  const std::size_t p = data.cols();
  if (config.mtry < 0 || static_cast<std::size_t>(config.mtry) > p)
    throw ModelError("train", "mtry must be within 1..p");

  std::vector<int> distinct(labels.labels());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 2) throw ModelError("train", "single-class labels, nothing to learn");

  ForestConfig cfg = config;
  if (cfg.mtry == 0) cfg.mtry = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(p))));

  std::vector<DecisionTree> trees(static_cast<std::size_t>(cfg.n_trees));
  parallel_for(trees.size(), threads, [&](std::size_t t) {
    Rng rng(Rng::derive(cfg.seed, t));
    TreeBuilder builder(data, labels.labels(), labels.n_classes(), cfg, cfg.mtry, rng);
    trees[t] = builder.build();
  });
  return RandomForest(std::move(trees), labels.n_classes(), p, cfg);
}

std::vector<double> gini_importance(const RandomForest& forest) {
  const std::size_t p = forest.n_features();
  std::vector<double> scores(p, 0.0);
  std::vector<double> tree_scores(p);

  for (const auto& tree : forest.trees()) {
    std::fill(tree_scores.begin(), tree_scores.end(), 0.0);

    // Internal-node class counts rebuilt bottom-up from the stored leaves.
    std::function<std::vector<std::uint32_t>(int)> walk = [&](int idx) {
      const TreeNode& node = tree.nodes[static_cast<std::size_t>(idx)];
      if (node.feature < 0) return node.counts;
      auto left = walk(node.left);
      const auto right = walk(node.right);
      double n_left = 0.0, n_right = 0.0;
      for (auto c : left) n_left += c;
      for (auto c : right) n_right += c;
      const double n_node = n_left + n_right;

      std::vector<std::uint32_t> merged(left.size());
      for (std::size_t c = 0; c < merged.size(); ++c) merged[c] = left[c] + right[c];
      const double decrease = gini_impurity(merged) -
                              (n_left / n_node) * gini_impurity(left) -
                              (n_right / n_node) * gini_impurity(right);
      tree_scores[static_cast<std::size_t>(node.feature)] += decrease * n_node;
      return merged;
    };

    const auto root_counts = walk(0);
    double n_root = 0.0;
    for (auto c : root_counts) n_root += c;
    for (std::size_t f = 0; f < p; ++f) scores[f] += tree_scores[f] / n_root;
  }

  for (auto& s : scores) s /= static_cast<double>(forest.trees().size());
  return scores;
}

std::string RandomForest::to_json() const {
  nlohmann::json doc;
  doc["format"] = "cpath-forest/1";
  doc["g"] = n_classes_;
  doc["p"] = n_features_;
  doc["config"] = {{"n_trees", config_.n_trees}, {"max_depth", config_.max_depth},
                   {"mtry", config_.mtry},       {"min_leaf", config_.min_leaf},
                   {"seed", config_.seed}};
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& tree : trees_) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& node : tree.nodes)
      nodes.push_back({node.feature, node.threshold, node.left, node.right, node.counts});
    trees.push_back(std::move(nodes));
  }
  doc["trees"] = std::move(trees);
  return doc.dump();
}

RandomForest RandomForest::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ModelError("forest-load", std::string("invalid JSON: ") + e.what());
  }
  try {
    if (doc.at("format") != "cpath-forest/1") throw ModelError("forest-load", "unknown format tag");
    const int g = doc.at("g").get<int>();
    const std::size_t p = doc.at("p").get<std::size_t>();
    ForestConfig cfg;
    const auto& jc = doc.at("config");
    cfg.n_trees = jc.at("n_trees").get<int>();
    cfg.max_depth = jc.at("max_depth").get<int>();
    cfg.mtry = jc.at("mtry").get<int>();
    cfg.min_leaf = jc.at("min_leaf").get<int>();
    cfg.seed = jc.at("seed").get<std::uint64_t>();

    std::vector<DecisionTree> trees;
    for (const auto& jt : doc.at("trees")) {
      DecisionTree tree;
      for (const auto& jn : jt) {
        TreeNode node;
        node.feature = jn.at(0).get<int>();
        node.threshold = jn.at(1).get<double>();
        node.left = jn.at(2).get<int>();
        node.right = jn.at(3).get<int>();
        node.counts = jn.at(4).get<std::vector<std::uint32_t>>();
        if (node.feature >= static_cast<int>(p))
          throw ModelError("forest-load", "split feature index out of range");
        if (node.feature < 0 && node.counts.empty())
          throw ModelError("forest-load", "leaf without class counts");
        tree.nodes.push_back(std::move(node));
      }
      if (tree.nodes.empty()) throw ModelError("forest-load", "empty tree");
      trees.push_back(std::move(tree));
    }
    return RandomForest(std::move(trees), g, p, cfg);
  } catch (const nlohmann::json::exception& e) {
    throw ModelError("forest-load", std::string("malformed forest dump: ") + e.what());
  }
}

}  // namespace cpath
