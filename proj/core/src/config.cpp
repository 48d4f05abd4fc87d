#include "stance/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <set>
#include <sstream>

#include "stance/error.hpp"
#include "stance/text_io.hpp"

namespace stance {

std::string_view to_string(Learner l) noexcept { return l == Learner::Knn ? "knn" : "forest"; }

std::optional<Learner> parse_learner(std::string_view s) {
  const auto l = to_lower(trim(s));
  if (l == "knn" || l == "timbl" || l == "ib1") return Learner::Knn;
  if (l == "forest" || l == "rf" || l == "random_forest") return Learner::Forest;
  return std::nullopt;
}

std::string_view to_string(MissingTargetPolicy p) noexcept {
  switch (p) {
    case MissingTargetPolicy::Skip: return "NONE";
    case MissingTargetPolicy::UnionOfAll: return "UNION_OF_ALL";
    case MissingTargetPolicy::ExplicitFile: return "EXPLICIT_FILE";
  }
  return "?";
}

std::optional<MissingTargetPolicy> parse_missing_target_policy(std::string_view s) {
  const auto l = to_lower(trim(s));
  if (l == "none") return MissingTargetPolicy::Skip;
  if (l == "union_of_all") return MissingTargetPolicy::UnionOfAll;
  if (l == "explicit_file") return MissingTargetPolicy::ExplicitFile;
  return std::nullopt;
}

std::optional<ReportFormat> parse_report_format(std::string_view s) {
  const auto l = to_lower(trim(s));
  if (l == "csv") return ReportFormat::Csv;
  if (l == "md" || l == "markdown") return ReportFormat::Markdown;
  return std::nullopt;
}

KnnConfig ExperimentConfig::knn_for(const std::string& target) const {
  auto c = knn;
  if (auto it = overrides.find(target); it != overrides.end() && it->second.knn_k) c.k = *it->second.knn_k;
  return c;
}

ForestConfig ExperimentConfig::forest_for(const std::string& target) const {
  auto c = forest;
  if (auto it = overrides.find(target); it != overrides.end() && it->second.forest_trees)
    c.n_trees = *it->second.forest_trees;
  return c;
}

namespace {

namespace pt = boost::property_tree;

std::string where(const std::string& section, const std::string& key) {
  return "config [" + section + "] " + key;
}

std::uint64_t to_uint(const std::string& v, const std::string& section, const std::string& key) {
  std::uint64_t out = 0;
  const auto t = trim(v);
  auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
  if (t.empty() || ec != std::errc{} || p != t.data() + t.size())
    throw Error(where(section, key) + ": expected a non-negative integer, got '" + v + "'");
  return out;
}

double to_double(const std::string& v, const std::string& section, const std::string& key) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != trim(v).size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error(where(section, key) + ": expected a number, got '" + v + "'");
  }
}

bool to_bool(const std::string& v, const std::string& section, const std::string& key) {
  const auto l = to_lower(trim(v));
  if (l == "true" || l == "yes" || l == "1" || l == "on") return true;
  if (l == "false" || l == "no" || l == "0" || l == "off") return false;
  throw Error(where(section, key) + ": expected true/false, got '" + v + "'");
}

std::vector<std::string> to_list(const std::string& v) {
  std::vector<std::string> out;
  for (auto item : split_view(v, ',')) {
    item = trim(item);
    if (!item.empty()) out.emplace_back(item);
  }
  return out;
}

template <typename T, typename Parse>
T parse_enum(const std::string& v, Parse parse, const std::string& section, const std::string& key) {
  auto r = parse(v);
  if (!r) throw Error(where(section, key) + ": unrecognised value '" + v + "'");
  return *r;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& content,
                                         const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    std::istringstream in(content);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(std::string("config: ") + e.what());
  }

  auto path_of = [&](const std::string& v) {
    std::filesystem::path p(std::string(trim(v)));
    return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
  };
  auto paths_of = [&](const std::string& v) {
    std::vector<std::filesystem::path> out;
    for (const auto& s : to_list(v)) out.push_back(path_of(s));
    return out;
  };

  ExperimentConfig c;
  std::optional<ColumnSpec> test_columns;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw Error("config: key '" + section + "' outside of any section");
    for (const auto& [key, node] : body) {
      const std::string v = node.data();
      auto unknown = [&] { throw Error(where(section, key) + ": unknown key"); };
      if (section == "data") {
        if (key == "train") c.train_path = path_of(v);
        else if (key == "test") c.test_path = path_of(v);
        else if (key == "columns") c.train_columns = ColumnSpec::parse(trim(v));
        else if (key == "test_columns") test_columns = ColumnSpec::parse(trim(v));
        else if (key == "strip_hashtags") c.tokenizer.strip_hashtags = to_bool(v, section, key);
        else unknown();
      } else if (section == "tagger") {
        if (key == "corpus") c.tagger_corpus = path_of(v);
        else if (key == "model") c.tagger_model = path_of(v);
        else if (key == "train_tagged") c.train_tagged = path_of(v);
        else if (key == "test_tagged") c.test_tagged = path_of(v);
        else if (key == "rare_threshold") c.tagger_training.rare_threshold = to_uint(v, section, key);
        else if (key == "max_suffix") c.tagger_training.max_suffix_length = to_uint(v, section, key);
        else if (key == "beam") c.viterbi.beam_factor = to_double(v, section, key);
        else unknown();
      } else if (section == "lexicons") {
        if (key == "mpqa") c.mpqa_path = path_of(v);
        else if (key == "arguing_patterns") c.arguing_patterns = paths_of(v);
        else if (key == "arguing_macros") c.arguing_macros = paths_of(v);
        else if (key == "arguing_mode") {
          const auto l = to_lower(trim(v));
          if (l == "word") c.arguing_mode = ArguingMatchMode::WholeWord;
          else if (l == "search") c.arguing_mode = ArguingMatchMode::Search;
          else throw Error(where(section, key) + ": expected word or search");
        } else if (key == "mpqa_presence_fallback") {
          c.vectorize.mpqa_presence_fallback = to_bool(v, section, key);
        } else unknown();
      } else if (section == "conll") {
        if (key == "train") c.conll_train = path_of(v);
        else if (key == "test") c.conll_test = path_of(v);
        else if (key == "train_index") c.conll_train_index = path_of(v);
        else if (key == "test_index") c.conll_test_index = path_of(v);
        else if (key == "preset") c.conll_columns = ConllColumns::preset(trim(v));
        else unknown();
      } else if (section == "experiment") {
        if (key == "schemes") {
          for (const auto& s : to_list(v)) c.schemes.push_back(parse_enum<FeatureScheme>(s, parse_scheme, section, key));
        } else if (key == "learners") {
          for (const auto& s : to_list(v)) c.learners.push_back(parse_enum<Learner>(s, parse_learner, section, key));
        } else if (key == "targets") c.targets = to_list(v);
        else if (key == "donald_training_policy" || key == "missing_target_policy")
          c.missing_target_policy = parse_enum<MissingTargetPolicy>(v, parse_missing_target_policy, section, key);
        else if (key == "donald_training_file" || key == "missing_target_train") c.missing_target_train = path_of(v);
        else if (key == "seed") c.seed = to_uint(v, section, key);
        else if (key == "threads") c.threads = to_uint(v, section, key);
        else if (key == "output") c.output_dir = path_of(v);
        else if (key == "format") c.format = parse_enum<ReportFormat>(v, parse_report_format, section, key);
        else if (key == "k_sweep") {
          for (const auto& s : to_list(v)) c.k_sweep.push_back(to_uint(s, section, key));
        } else if (key == "sweep_scheme") c.sweep_scheme = parse_enum<FeatureScheme>(v, parse_scheme, section, key);
        else if (key == "sweep_targets") c.sweep_targets = to_list(v);
        else unknown();
      } else if (section == "knn") {
        if (key == "k") c.knn.k = to_uint(v, section, key);
        else if (key == "weighting") c.knn.weighting = parse_enum<Weighting>(v, parse_weighting, section, key);
        else if (key == "neighbors") c.knn.neighbors = parse_enum<NeighborSemantics>(v, parse_neighbors, section, key);
        else unknown();
      } else if (section == "forest") {
        if (key == "n_trees") c.forest.n_trees = to_uint(v, section, key);
        else if (key == "max_features") c.forest.max_features = parse_enum<MaxFeatures>(v, parse_max_features, section, key);
        else if (key == "bootstrap") c.forest.bootstrap = to_bool(v, section, key);
        else if (key == "min_samples_split") c.forest.min_samples_split = to_uint(v, section, key);
        else if (key == "threads") c.forest.threads = to_uint(v, section, key);
        else unknown();
      } else if (section.starts_with("target:")) {
        auto& o = c.overrides[std::string(trim(std::string_view(section).substr(7)))];
        if (key == "knn.k") o.knn_k = to_uint(v, section, key);
        else if (key == "forest.n_trees") o.forest_trees = to_uint(v, section, key);
        else unknown();
      } else {
        throw Error("config: unknown section [" + section + "]");
      }
    }
  }
  c.test_columns = test_columns.value_or(c.train_columns);
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  return parse_experiment_config(read_file(path), path.parent_path());
}

void ExperimentConfig::validate() const {
  auto need = [](const std::filesystem::path& p, const std::string& what) {
    if (p.empty()) throw Error("config: " + what + " is not set");
    if (!std::filesystem::exists(p)) throw Error("config: " + what + " does not exist: " + p.string());
  };
  auto need_opt = [&](const std::optional<std::filesystem::path>& p, const std::string& what) {
    if (!p) throw Error("config: " + what + " is not set");
    need(*p, what);
  };
  need(train_path, "[data] train");
  need(test_path, "[data] test");
  if (schemes.empty()) throw Error("config: [experiment] schemes is empty");
  if (learners.empty()) throw Error("config: [experiment] learners is empty");
  if (knn.k == 0) throw Error("config: [knn] k must be at least 1");
  if (forest.n_trees == 0) throw Error("config: [forest] n_trees must be at least 1");
  if (forest.min_samples_split < 2) throw Error("config: [forest] min_samples_split must be at least 2");

  bool token_schemes = false;
  for (auto s : schemes) {
    token_schemes |= !uses_triples(s);
    if (s == FeatureScheme::MpqaWeighted) need_opt(mpqa_path, "[lexicons] mpqa");
    if (s == FeatureScheme::ArguingBinary) {
      if (arguing_patterns.empty()) throw Error("config: [lexicons] arguing_patterns is not set");
      for (const auto& p : arguing_patterns) need(p, "[lexicons] arguing_patterns entry");
      for (const auto& p : arguing_macros) need(p, "[lexicons] arguing_macros entry");
    }
    if (s == FeatureScheme::DepTriples) {
      need_opt(conll_train, "[conll] train");
      need_opt(conll_test, "[conll] test");
      need_opt(conll_train_index, "[conll] train_index");
      need_opt(conll_test_index, "[conll] test_index");
    }
  }
  if (token_schemes) {
    const bool pretagged = train_tagged || test_tagged;
    if (pretagged) {
      need_opt(train_tagged, "[tagger] train_tagged");
      need_opt(test_tagged, "[tagger] test_tagged");
    } else if (tagger_corpus && tagger_model) {
      throw Error("config: set only one of [tagger] corpus and [tagger] model");
    } else if (tagger_corpus) {
      need(*tagger_corpus, "[tagger] corpus");
    } else if (tagger_model) {
      need(*tagger_model, "[tagger] model");
    } else {
      throw Error("config: token-based schemes need [tagger] corpus, model, or train_tagged/test_tagged");
    }
  }
  if (missing_target_policy == MissingTargetPolicy::ExplicitFile)
    need_opt(missing_target_train, "[experiment] donald_training_file");
  if (sweep_scheme && k_sweep.empty()) throw Error("config: sweep_scheme set without k_sweep");
  for (auto k : k_sweep)
    if (k == 0) throw Error("config: k_sweep values must be at least 1");
}

}  // namespace stance
