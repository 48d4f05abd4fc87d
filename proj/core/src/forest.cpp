#include "stance/forest.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <string>

#include "stance/error.hpp"
#include "stance/mbl.hpp"
#include "stance/text_io.hpp"

namespace stance {

std::string_view to_string(MaxFeatures m) noexcept { return m == MaxFeatures::Sqrt ? "SQRT" : "ALL"; }

std::optional<MaxFeatures> parse_max_features(std::string_view s) {
  const auto l = to_lower(trim(s));
  if (l == "sqrt") return MaxFeatures::Sqrt;
  if (l == "all") return MaxFeatures::All;
  return std::nullopt;
}

double gini(const LabelCounts& counts) {
  const std::size_t total = counts[0] + counts[1] + counts[2];
  if (total == 0) throw Error("gini: zero total count");
  double sum = 0;
  for (auto c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(total);
    sum += p * p;
  }
  return 1.0 - sum;
}

StanceLabel DecisionTree::predict(std::span<const std::int8_t> query) const {
  std::size_t i = 0;
  while (!nodes_.at(i).is_leaf()) {
    const auto& n = nodes_[i];
    i = static_cast<double>(query[static_cast<std::size_t>(n.feature)]) <= n.threshold ? n.left : n.right;
  }
  return nodes_[i].label;
}

std::size_t DecisionTree::depth() const {
  if (nodes_.empty()) return 0;
  std::vector<std::size_t> d(nodes_.size(), 0);
  std::size_t best = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    best = std::max(best, d[i]);
    if (!nodes_[i].is_leaf()) {
      d[nodes_[i].left] = d[i] + 1;
      d[nodes_[i].right] = d[i] + 1;
    }
  }
  return best;
}

std::mt19937_64 tree_rng(std::uint64_t seed, std::size_t tree_index) {
  // splitmix64 finaliser over (seed, index)
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(tree_index) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return std::mt19937_64(z);
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  const std::uint64_t range = n;
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % range;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return static_cast<std::size_t>(x % range);
}

namespace {

__extension__ typedef unsigned __int128 Wide;

// Count-weighted child Gini of a candidate split, times n, kept as the exact
// fraction num / den so that ties are decided without rounding:
// sum over children of (n_c^2 - sum_k c_k^2) / n_c.
struct Impurity {
  std::uint64_t num = 0;
  std::uint64_t den = 0;  // 0 = no split yet

  static Impurity of(const LabelCounts& l, const LabelCounts& r) {
    const std::uint64_t nl = l[0] + l[1] + l[2];
    const std::uint64_t nr = r[0] + r[1] + r[2];
    std::uint64_t sl = 0, sr = 0;
    for (std::size_t k = 0; k < 3; ++k) {
      sl += static_cast<std::uint64_t>(l[k]) * l[k];
      sr += static_cast<std::uint64_t>(r[k]) * r[k];
    }
    return {(nl * nl - sl) * nr + (nr * nr - sr) * nl, nl * nr};
  }
  // -1, 0, 1 as this is smaller, equal, larger than `o`.
  int compare(const Impurity& o) const {
    if (o.den == 0) return den == 0 ? 0 : -1;
    if (den == 0) return 1;
    const Wide a = static_cast<Wide>(num) * o.den;
    const Wide b = static_cast<Wide>(o.num) * den;
    return a < b ? -1 : (a > b ? 1 : 0);
  }
};

struct Split {
  int feature = -1;
  double threshold = 0;
  Impurity impurity;
};

class TreeBuilder {
 public:
  TreeBuilder(std::span<const FeatureVector> rows, std::size_t max_features,
              std::size_t min_samples_split, std::mt19937_64& rng)
      : rows_(rows),
        width_(rows.empty() ? 0 : rows.front().values.size()),
        max_features_(std::max<std::size_t>(1, max_features)),
        min_split_(min_samples_split),
        rng_(rng) {}

  std::vector<TreeNode> build(std::vector<std::size_t> sample) {
    grow(std::move(sample));
    return std::move(nodes_);
  }

 private:
  LabelCounts tally(const std::vector<std::size_t>& s) const {
    LabelCounts c{};
    for (auto i : s) ++c[index_of(rows_[i].label)];
    return c;
  }

  std::size_t grow(std::vector<std::size_t> sample) {
    const auto counts = tally(sample);
    const std::size_t id = nodes_.size();
    nodes_.push_back(TreeNode{});
    nodes_[id].label = argmax_label(counts);

    const bool pure = std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }) <= 1;
    if (pure || sample.size() < min_split_) return id;
    const auto split = best_split(sample);
    if (split.feature < 0) return id;

    std::vector<std::size_t> left, right;
    for (auto i : sample) {
      const double v = rows_[i].values[static_cast<std::size_t>(split.feature)];
      (v <= split.threshold ? left : right).push_back(i);
    }
    sample.clear();
    sample.shrink_to_fit();
    nodes_[id].feature = split.feature;
    nodes_[id].threshold = split.threshold;
    const auto l = grow(std::move(left));
    nodes_[id].left = l;
    const auto r = grow(std::move(right));
    nodes_[id].right = r;
    return id;
  }

  Split best_split(const std::vector<std::size_t>& sample) {
    std::vector<std::size_t> order(width_);
    std::iota(order.begin(), order.end(), 0);
    const bool all = max_features_ >= width_;
    if (!all) {
      for (std::size_t i = width_; i > 1; --i) std::swap(order[i - 1], order[uniform_index(rng_, i)]);
    }
    Split best;
    std::size_t evaluated = 0;
    std::map<int, LabelCounts> by_value;
    for (auto f : order) {
      if (evaluated >= max_features_) break;
      by_value.clear();
      for (auto i : sample) ++by_value[rows_[i].values[f]][index_of(rows_[i].label)];
      if (by_value.size() < 2) continue;
      ++evaluated;

      LabelCounts total{};
      for (const auto& [_, c] : by_value)
        for (std::size_t k = 0; k < 3; ++k) total[k] += c[k];
      LabelCounts left{};
      for (auto it = by_value.begin(); std::next(it) != by_value.end(); ++it) {
        for (std::size_t k = 0; k < 3; ++k) left[k] += it->second[k];
        LabelCounts right{};
        for (std::size_t k = 0; k < 3; ++k) right[k] = total[k] - left[k];
        const auto impurity = Impurity::of(left, right);
        const double threshold = (it->first + std::next(it)->first) / 2.0;
        const int fi = static_cast<int>(f);
        const int cmp = impurity.compare(best.impurity);
        if (cmp < 0 ||
            (cmp == 0 && (fi < best.feature || (fi == best.feature && threshold < best.threshold)))) {
          best = Split{fi, threshold, impurity};
        }
      }
    }
    return best;
  }

  std::span<const FeatureVector> rows_;
  std::size_t width_;
  std::size_t max_features_;
  std::size_t min_split_;
  std::mt19937_64& rng_;
  std::vector<TreeNode> nodes_;
};

}  // namespace

DecisionTree grow_tree(std::span<const FeatureVector> rows, std::span<const std::size_t> sample,
                       std::size_t max_features, std::size_t min_samples_split,
                       std::mt19937_64& rng) {
  if (sample.empty()) throw Error("grow_tree: empty sample");
  TreeBuilder b(rows, max_features, min_samples_split, rng);
  return DecisionTree(b.build({sample.begin(), sample.end()}));
}

RandomForestModel fit_forest(std::span<const FeatureVector> vectors, const ForestConfig& config) {
  if (vectors.empty()) throw Error("fit_forest: no training vectors");
  if (config.n_trees == 0) throw Error("fit_forest: n_trees must be at least 1");
  if (config.min_samples_split < 2) throw Error("fit_forest: min_samples_split must be at least 2");
  const std::size_t width = vectors.front().values.size();
  RandomForestModel model;
  model.config_ = config;
  model.features_ = width;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].values.size() != width)
      throw Error("fit_forest: vector " + std::to_string(i) + " has length " +
                  std::to_string(vectors[i].values.size()) + ", expected " + std::to_string(width));
    ++model.class_counts_[index_of(vectors[i].label)];
  }
  const std::size_t max_features =
      config.max_features == MaxFeatures::All
          ? width
          : static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(width))));

  auto build = [&](std::size_t t) {
    auto rng = tree_rng(config.seed, t);
    std::vector<std::size_t> sample(vectors.size());
    if (config.bootstrap) {
      for (auto& s : sample) s = uniform_index(rng, vectors.size());
    } else {
      std::iota(sample.begin(), sample.end(), 0);
    }
    return grow_tree(vectors, sample, max_features, config.min_samples_split, rng);
  };

  model.trees_.resize(config.n_trees);
  const std::size_t workers = std::max<std::size_t>(1, std::min(config.threads, config.n_trees));
  if (workers == 1) {
    for (std::size_t t = 0; t < config.n_trees; ++t) model.trees_[t] = build(t);
  } else {
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w)
      jobs.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t t = w; t < config.n_trees; t += workers) model.trees_[t] = build(t);
      }));
    for (auto& j : jobs) j.get();
  }
  return model;
}

StanceLabel predict_forest(const RandomForestModel& model, std::span<const std::int8_t> query) {
  if (query.size() != model.feature_count())
    throw Error("query has " + std::to_string(query.size()) + " features, forest expects " +
                std::to_string(model.feature_count()));
  LabelCounts votes{};
  for (const auto& t : model.trees()) ++votes[index_of(t.predict(query))];
  return vote(votes, model.class_frequencies());
}

void RandomForestModel::save(std::ostream& out) const {
  out << "stance-forest 1\n";
  out << "n_trees " << config_.n_trees << '\n';
  out << "max_features " << to_string(config_.max_features) << '\n';
  out << "bootstrap " << (config_.bootstrap ? 1 : 0) << '\n';
  out << "min_samples_split " << config_.min_samples_split << '\n';
  out << "seed " << config_.seed << '\n';
  out << "features " << features_ << '\n';
  out << "class_counts " << class_counts_[0] << ' ' << class_counts_[1] << ' ' << class_counts_[2] << '\n';
  out << std::setprecision(17);
  for (const auto& t : trees_) {
    out << "tree " << t.nodes().size() << '\n';
    for (const auto& n : t.nodes()) {
      if (n.is_leaf()) out << "L " << to_string(n.label) << '\n';
      else out << "N " << n.feature << ' ' << n.threshold << ' ' << to_string(n.label) << '\n';
    }
  }
}

RandomForestModel RandomForestModel::load(std::istream& in) {
  std::string word;
  int version = 0;
  if (!(in >> word >> version) || word != "stance-forest" || version != 1)
    throw Error("forest model: bad header");
  RandomForestModel m;
  std::string mf;
  int bootstrap = 0;
  in >> word >> m.config_.n_trees >> word >> mf >> word >> bootstrap >> word >>
      m.config_.min_samples_split >> word >> m.config_.seed >> word >> m.features_ >> word >>
      m.class_counts_[0] >> m.class_counts_[1] >> m.class_counts_[2];
  if (!in) throw Error("forest model: bad preamble");
  const auto parsed = parse_max_features(mf);
  if (!parsed) throw Error("forest model: bad max_features");
  m.config_.max_features = *parsed;
  m.config_.bootstrap = bootstrap != 0;

  auto read_label = [&]() {
    std::string s;
    in >> s;
    auto l = parse_stance(s);
    if (!l) throw Error("forest model: bad label '" + s + "'");
    return *l;
  };
  for (std::size_t t = 0; t < m.config_.n_trees; ++t) {
    std::size_t count = 0;
    if (!(in >> word >> count) || word != "tree") throw Error("forest model: expected tree");
    std::vector<TreeNode> nodes(count);
    for (auto& n : nodes) {
      in >> word;
      if (word == "L") {
        n.label = read_label();
      } else if (word == "N") {
        in >> n.feature >> n.threshold;
        n.label = read_label();
        if (n.feature < 0 || static_cast<std::size_t>(n.feature) >= m.features_)
          throw Error("forest model: feature index out of range");
      } else {
        throw Error("forest model: bad node record");
      }
    }
    // Rebuild child links from the preorder layout.
    std::size_t next = 0;
    auto link = [&](auto&& self) -> std::size_t {
      if (next >= nodes.size()) throw Error("forest model: truncated tree");
      const std::size_t id = next++;
      if (!nodes[id].is_leaf()) {
        nodes[id].left = self(self);
        nodes[id].right = self(self);
      }
      return id;
    };
    link(link);
    if (next != nodes.size()) throw Error("forest model: trailing nodes in tree");
    m.trees_.emplace_back(std::move(nodes));
  }
  return m;
}

}  // namespace stance
