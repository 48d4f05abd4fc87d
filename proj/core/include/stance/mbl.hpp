#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "stance/features.hpp"
#include "stance/labels.hpp"

namespace stance {

enum class Weighting : std::uint8_t { None, GainRatio };

enum class NeighborSemantics : std::uint8_t {
  /// k counts distinct distance values; every instance at one of the k
  /// smallest distances joins the neighbourhood (TiMBL's reading of k).
  NearestDistances,
  /// k counts instances.
  NearestInstances,
};

struct KnnConfig {
  std::size_t k = 1;
  Weighting weighting = Weighting::GainRatio;
  NeighborSemantics neighbors = NeighborSemantics::NearestDistances;
};

std::string_view to_string(Weighting w) noexcept;
std::string_view to_string(NeighborSemantics n) noexcept;
std::optional<Weighting> parse_weighting(std::string_view s);
std::optional<NeighborSemantics> parse_neighbors(std::string_view s);

/// Training vectors stored verbatim, as a dense row-major matrix.
class InstanceBase {
 public:
  /// Throws stance::Error on empty or ragged input.
  static InstanceBase fit(std::span<const FeatureVector> vectors);

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t feature_count() const noexcept { return width_; }
  std::span<const std::int8_t> row(std::size_t i) const {
    return {values_.data() + i * width_, width_};
  }
  StanceLabel label(std::size_t i) const { return labels_[i]; }
  const LabelCounts& class_frequencies() const noexcept { return class_counts_; }

 private:
  std::size_t width_ = 0;
  std::vector<std::int8_t> values_;
  std::vector<StanceLabel> labels_;
  LabelCounts class_counts_{};
};

using FeatureWeights = std::vector<double>;

/// Information gain of the class given each feature, divided by the
/// feature's split info (log base 2). Constant features weigh 0.
FeatureWeights gain_ratio_weights(const InstanceBase& base);
FeatureWeights weights_for(const InstanceBase& base, Weighting weighting);

/// Weighted count of positions where the symbols differ.
double overlap_distance(std::span<const std::int8_t> a, std::span<const std::int8_t> b,
                        std::span<const double> weights);

/// Distances closer than this relative gap count as the same distance.
inline constexpr double kDistanceTolerance = 1e-9;
bool same_distance(double a, double b) noexcept;

/// Majority label of a neighbourhood; ties go to the larger training-class
/// frequency, then to the fixed AGAINST > FAVOR > NONE order.
StanceLabel vote(const LabelCounts& neighborhood, const LabelCounts& class_frequencies) noexcept;

StanceLabel classify(const InstanceBase& base, const KnnConfig& config,
                     std::span<const double> weights, std::span<const std::int8_t> query);

/// Accuracy of the classifier on `test` for each k, computing every
/// query's distances once. Output order follows `k_values`.
std::vector<std::pair<std::size_t, double>> sweep_k(
    const InstanceBase& base, std::span<const double> weights, std::span<const FeatureVector> test,
    std::span<const std::size_t> k_values,
    NeighborSemantics neighbors = NeighborSemantics::NearestDistances);

/// Stored base, configuration and weights: everything `classify` needs.
struct KnnModel {
  KnnConfig config;
  InstanceBase base;
  FeatureWeights weights;

  static KnnModel train(std::span<const FeatureVector> vectors, const KnnConfig& config);
  StanceLabel predict(std::span<const std::int8_t> query) const {
    return classify(base, config, weights, query);
  }

  void save(std::ostream& out) const;
  static KnnModel load(std::istream& in);
};

}  // namespace stance
