#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "stance/features.hpp"
#include "stance/labels.hpp"

namespace stance {

enum class MaxFeatures : std::uint8_t { Sqrt, All };

std::string_view to_string(MaxFeatures m) noexcept;
std::optional<MaxFeatures> parse_max_features(std::string_view s);

struct ForestConfig {
  std::size_t n_trees = 10;
  MaxFeatures max_features = MaxFeatures::Sqrt;
  bool bootstrap = true;
  std::size_t min_samples_split = 2;
  std::uint64_t seed = 0;
  /// Worker threads for tree growing; results do not depend on it.
  std::size_t threads = 1;
};

/// Gini impurity 1 - sum p_c^2. Throws on a zero total.
double gini(const LabelCounts& counts);

struct TreeNode {
  /// -1 for a leaf.
  int feature = -1;
  double threshold = 0.0;
  std::size_t left = 0;
  std::size_t right = 0;
  StanceLabel label = StanceLabel::None;

  bool is_leaf() const noexcept { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

/// CART tree; nodes are stored in preorder with the root at index 0.
/// Queries with value <= threshold go left.
class DecisionTree {
 public:
  DecisionTree() = default;
  explicit DecisionTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  StanceLabel predict(std::span<const std::int8_t> query) const;
  std::size_t depth() const;

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  std::vector<TreeNode> nodes_;
};

/// Grows one tree greedily on the rows named by `sample` (repeats allowed).
/// At each node up to `max_features` non-constant features, visited in an
/// order drawn from `rng`, are searched for the split minimising the
/// count-weighted child Gini; ties go to the lower feature index, then the
/// lower threshold.
DecisionTree grow_tree(std::span<const FeatureVector> rows, std::span<const std::size_t> sample,
                       std::size_t max_features, std::size_t min_samples_split,
                       std::mt19937_64& rng);

/// Generator for tree `tree_index` of a forest seeded with `seed`.
std::mt19937_64 tree_rng(std::uint64_t seed, std::size_t tree_index);

/// Uniform integer in [0, n) by rejection; identical across standard
/// libraries, unlike std::uniform_int_distribution.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t n);

class RandomForestModel {
 public:
  const std::vector<DecisionTree>& trees() const noexcept { return trees_; }
  const ForestConfig& config() const noexcept { return config_; }
  std::size_t feature_count() const noexcept { return features_; }
  const LabelCounts& class_frequencies() const noexcept { return class_counts_; }

  void save(std::ostream& out) const;
  static RandomForestModel load(std::istream& in);

  friend RandomForestModel fit_forest(std::span<const FeatureVector> vectors,
                                      const ForestConfig& config);

 private:
  std::vector<DecisionTree> trees_;
  ForestConfig config_;
  std::size_t features_ = 0;
  LabelCounts class_counts_{};
};

RandomForestModel fit_forest(std::span<const FeatureVector> vectors, const ForestConfig& config);

/// Mode of the tree votes; ties go to the larger training-class frequency,
/// then to the fixed AGAINST > FAVOR > NONE order.
StanceLabel predict_forest(const RandomForestModel& model, std::span<const std::int8_t> query);

}  // namespace stance
