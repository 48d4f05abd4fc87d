#include "stance/mbl.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <string>

#include "stance/error.hpp"
#include "stance/text_io.hpp"

namespace stance {

std::string_view to_string(Weighting w) noexcept {
  return w == Weighting::GainRatio ? "GAIN_RATIO" : "NONE";
}

std::string_view to_string(NeighborSemantics n) noexcept {
  return n == NeighborSemantics::NearestDistances ? "K_NEAREST_DISTANCES" : "K_NEAREST_INSTANCES";
}

std::optional<Weighting> parse_weighting(std::string_view s) {
  const auto l = to_lower(trim(s));
  if (l == "gain_ratio" || l == "gr") return Weighting::GainRatio;
  if (l == "none") return Weighting::None;
  return std::nullopt;
}

std::optional<NeighborSemantics> parse_neighbors(std::string_view s) {
  const auto l = to_lower(trim(s));
  if (l == "k_nearest_distances" || l == "distances") return NeighborSemantics::NearestDistances;
  if (l == "k_nearest_instances" || l == "instances") return NeighborSemantics::NearestInstances;
  return std::nullopt;
}

InstanceBase InstanceBase::fit(std::span<const FeatureVector> vectors) {
  if (vectors.empty()) throw Error("instance base: no training vectors");
  InstanceBase base;
  base.width_ = vectors.front().values.size();
  base.values_.reserve(base.width_ * vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const auto& v = vectors[i];
    if (v.values.size() != base.width_)
      throw Error("instance base: vector " + std::to_string(i) + " has length " +
                  std::to_string(v.values.size()) + ", expected " + std::to_string(base.width_));
    base.values_.insert(base.values_.end(), v.values.begin(), v.values.end());
    base.labels_.push_back(v.label);
    ++base.class_counts_[index_of(v.label)];
  }
  return base;
}

namespace {

double entropy(const LabelCounts& counts, std::size_t total) {
  double h = 0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

FeatureWeights gain_ratio_weights(const InstanceBase& base) {
  const std::size_t n = base.size();
  const double h_class = entropy(base.class_frequencies(), n);
  FeatureWeights w(base.feature_count(), 0.0);
  // Per-value class tallies; values are small signed integers.
  std::array<LabelCounts, 256> per_value{};
  for (std::size_t f = 0; f < base.feature_count(); ++f) {
    for (auto& pv : per_value) pv = LabelCounts{};
    for (std::size_t i = 0; i < n; ++i)
      ++per_value[static_cast<std::uint8_t>(base.row(i)[f])][index_of(base.label(i))];
    double h_cond = 0;
    double split = 0;
    for (const auto& pv : per_value) {
      const std::size_t nv = pv[0] + pv[1] + pv[2];
      if (nv == 0) continue;
      const double p = static_cast<double>(nv) / static_cast<double>(n);
      h_cond += p * entropy(pv, nv);
      split -= p * std::log2(p);
    }
    if (split <= 0.0) continue;
    const double gain = std::max(0.0, h_class - h_cond);
    w[f] = std::clamp(gain / split, 0.0, 1.0);
  }
  return w;
}

FeatureWeights weights_for(const InstanceBase& base, Weighting weighting) {
  if (weighting == Weighting::GainRatio) return gain_ratio_weights(base);
  return FeatureWeights(base.feature_count(), 1.0);
}

double overlap_distance(std::span<const std::int8_t> a, std::span<const std::int8_t> b,
                        std::span<const double> weights) {
  if (a.size() != b.size() || a.size() != weights.size())
    throw Error("overlap_distance: length mismatch (" + std::to_string(a.size()) + ", " +
                std::to_string(b.size()) + ", " + std::to_string(weights.size()) + ")");
  double d = 0;
  for (std::size_t f = 0; f < a.size(); ++f)
    if (a[f] != b[f]) d += weights[f];
  return d;
}

bool same_distance(double a, double b) noexcept {
  return std::abs(a - b) <= kDistanceTolerance * std::max(std::abs(a), std::abs(b));
}

StanceLabel vote(const LabelCounts& neighborhood, const LabelCounts& class_frequencies) noexcept {
  StanceLabel best = StanceLabel::Against;
  bool have = false;
  for (auto l : kAllStances) {
    const auto i = index_of(l);
    if (neighborhood[i] == 0) continue;
    if (!have) {
      best = l;
      have = true;
      continue;
    }
    const auto b = index_of(best);
    if (neighborhood[i] != neighborhood[b]) {
      if (neighborhood[i] > neighborhood[b]) best = l;
    } else if (class_frequencies[i] != class_frequencies[b]) {
      if (class_frequencies[i] > class_frequencies[b]) best = l;
    } else if (tie_rank(l) < tie_rank(best)) {
      best = l;
    }
  }
  return best;
}

namespace {

struct Ranked {
  std::vector<std::size_t> order;  // instance indices by ascending distance
  std::vector<std::size_t> group;  // distance-group id of order[i]
};

// Sorts instances by distance and groups equal distances. In instance mode
// the order inside a group is made independent of insertion order.
Ranked rank(const InstanceBase& base, std::span<const double> weights,
            std::span<const std::int8_t> query, NeighborSemantics neighbors) {
  const std::size_t n = base.size();
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) dist[i] = overlap_distance(base.row(i), query, weights);
  Ranked r;
  r.order.resize(n);
  std::iota(r.order.begin(), r.order.end(), 0);
  std::stable_sort(r.order.begin(), r.order.end(),
                   [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
  r.group.resize(n);
  std::size_t g = 0;
  double leader = n ? dist[r.order[0]] : 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = dist[r.order[i]];
    if (!same_distance(d, leader)) {
      ++g;
      leader = d;
    }
    r.group[i] = g;
  }
  if (neighbors == NeighborSemantics::NearestInstances) {
    std::vector<std::size_t> pos(n);
    for (std::size_t i = 0; i < n; ++i) pos[r.order[i]] = r.group[i];
    std::sort(r.order.begin(), r.order.end(), [&](std::size_t a, std::size_t b) {
      if (pos[a] != pos[b]) return pos[a] < pos[b];
      const auto la = base.label(a), lb = base.label(b);
      if (la != lb) return tie_rank(la) < tie_rank(lb);
      const auto ra = base.row(a), rb = base.row(b);
      return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
    });
    for (std::size_t i = 0; i < n; ++i) r.group[i] = pos[r.order[i]];
  }
  return r;
}

StanceLabel decide(const InstanceBase& base, const Ranked& r, std::size_t k,
                   NeighborSemantics neighbors) {
  LabelCounts counts{};
  for (std::size_t i = 0; i < r.order.size(); ++i) {
    if (neighbors == NeighborSemantics::NearestDistances) {
      if (r.group[i] >= k) break;
    } else if (i >= k) {
      break;
    }
    ++counts[index_of(base.label(r.order[i]))];
  }
  return vote(counts, base.class_frequencies());
}

void check_query(const InstanceBase& base, std::span<const double> weights, std::size_t query_len) {
  if (query_len != base.feature_count())
    throw Error("query has " + std::to_string(query_len) + " features, instance base has " +
                std::to_string(base.feature_count()));
  if (weights.size() != base.feature_count()) throw Error("feature weights do not match instance base");
}

}  // namespace

StanceLabel classify(const InstanceBase& base, const KnnConfig& config,
                     std::span<const double> weights, std::span<const std::int8_t> query) {
  if (config.k == 0) throw Error("k must be at least 1");
  check_query(base, weights, query.size());
  return decide(base, rank(base, weights, query, config.neighbors), config.k, config.neighbors);
}

std::vector<std::pair<std::size_t, double>> sweep_k(const InstanceBase& base,
                                                    std::span<const double> weights,
                                                    std::span<const FeatureVector> test,
                                                    std::span<const std::size_t> k_values,
                                                    NeighborSemantics neighbors) {
  if (k_values.empty()) throw Error("sweep_k: no k values");
  for (auto k : k_values)
    if (k == 0) throw Error("k must be at least 1");
  if (test.empty()) throw Error("sweep_k: no test vectors");
  std::vector<std::size_t> correct(k_values.size(), 0);
  for (const auto& q : test) {
    check_query(base, weights, q.values.size());
    const auto r = rank(base, weights, q.values, neighbors);
    for (std::size_t j = 0; j < k_values.size(); ++j)
      if (decide(base, r, k_values[j], neighbors) == q.label) ++correct[j];
  }
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t j = 0; j < k_values.size(); ++j)
    out.emplace_back(k_values[j], static_cast<double>(correct[j]) / static_cast<double>(test.size()));
  return out;
}

KnnModel KnnModel::train(std::span<const FeatureVector> vectors, const KnnConfig& config) {
  if (config.k == 0) throw Error("k must be at least 1");
  KnnModel m{config, InstanceBase::fit(vectors), {}};
  m.weights = weights_for(m.base, config.weighting);
  return m;
}

void KnnModel::save(std::ostream& out) const {
  out << "stance-knn 1\n";
  out << "k " << config.k << '\n';
  out << "weighting " << to_string(config.weighting) << '\n';
  out << "neighbors " << to_string(config.neighbors) << '\n';
  out << "features " << base.feature_count() << '\n';
  out << std::setprecision(17);
  out << "weights";
  for (double w : weights) out << ' ' << w;
  out << '\n';
  out << "instances " << base.size() << '\n';
  for (std::size_t i = 0; i < base.size(); ++i) {
    for (auto v : base.row(i)) out << static_cast<int>(v) << ',';
    out << to_string(base.label(i)) << '\n';
  }
}

KnnModel KnnModel::load(std::istream& in) {
  std::string word;
  int version = 0;
  if (!(in >> word >> version) || word != "stance-knn" || version != 1)
    throw Error("k-NN model: bad header");
  KnnModel m;
  std::string weighting, neighbors;
  std::size_t features = 0, count = 0;
  in >> word >> m.config.k;
  in >> word >> weighting;
  in >> word >> neighbors;
  in >> word >> features;
  if (!in) throw Error("k-NN model: bad preamble");
  const auto w = parse_weighting(weighting);
  const auto nb = parse_neighbors(neighbors);
  if (!w || !nb) throw Error("k-NN model: bad configuration");
  m.config.weighting = *w;
  m.config.neighbors = *nb;
  in >> word;
  m.weights.resize(features);
  for (auto& x : m.weights) in >> x;
  in >> word >> count;
  if (!in || word != "instances") throw Error("k-NN model: bad weights section");
  std::string line;
  std::getline(in, line);
  std::string rows;
  for (std::size_t i = 0; i < count; ++i) {
    if (!std::getline(in, line)) throw Error("k-NN model: truncated instances");
    rows += line + "\n";
  }
  m.base = InstanceBase::fit(parse_feature_rows(rows, features, "k-NN model"));
  return m;
}

}  // namespace stance
