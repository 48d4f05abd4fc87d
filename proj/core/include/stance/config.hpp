#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "stance/conll.hpp"
#include "stance/corpus.hpp"
#include "stance/features.hpp"
#include "stance/forest.hpp"
#include "stance/lexicons.hpp"
#include "stance/mbl.hpp"
#include "stance/tagger.hpp"
#include "stance/tokenize.hpp"

namespace stance {

enum class Learner : std::uint8_t { Knn, Forest };
std::string_view to_string(Learner l) noexcept;
std::optional<Learner> parse_learner(std::string_view s);

/// What to train on for a test target that has no training tweets.
enum class MissingTargetPolicy : std::uint8_t {
  Skip,         // NONE: leave the target out of the results
  UnionOfAll,   // UNION_OF_ALL: every training tweet of the other targets
  ExplicitFile  // EXPLICIT_FILE: all tweets of a user-supplied corpus file
};
std::string_view to_string(MissingTargetPolicy p) noexcept;
std::optional<MissingTargetPolicy> parse_missing_target_policy(std::string_view s);

enum class ReportFormat : std::uint8_t { Csv, Markdown };
std::optional<ReportFormat> parse_report_format(std::string_view s);

struct TargetOverride {
  std::optional<std::size_t> knn_k;
  std::optional<std::size_t> forest_trees;
};

struct ExperimentConfig {
  // [data]
  std::filesystem::path train_path;
  std::filesystem::path test_path;
  ColumnSpec train_columns;
  ColumnSpec test_columns;
  TokenizerOptions tokenizer;

  // [tagger]: exactly one of corpus / model, or both pre-tagged files
  std::optional<std::filesystem::path> tagger_corpus;
  std::optional<std::filesystem::path> tagger_model;
  std::optional<std::filesystem::path> train_tagged;
  std::optional<std::filesystem::path> test_tagged;
  TaggerTrainingOptions tagger_training;
  ViterbiOptions viterbi;

  // [lexicons]
  std::optional<std::filesystem::path> mpqa_path;
  std::vector<std::filesystem::path> arguing_patterns;
  std::vector<std::filesystem::path> arguing_macros;
  ArguingMatchMode arguing_mode = ArguingMatchMode::WholeWord;
  VectorizeOptions vectorize;

  // [conll]
  std::optional<std::filesystem::path> conll_train;
  std::optional<std::filesystem::path> conll_test;
  std::optional<std::filesystem::path> conll_train_index;
  std::optional<std::filesystem::path> conll_test_index;
  ConllColumns conll_columns;

  // [experiment]
  std::vector<FeatureScheme> schemes;
  std::vector<Learner> learners;
  std::vector<std::string> targets;  // empty = every test target
  MissingTargetPolicy missing_target_policy = MissingTargetPolicy::Skip;
  std::optional<std::filesystem::path> missing_target_train;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
  std::filesystem::path output_dir = "results";
  ReportFormat format = ReportFormat::Csv;
  std::vector<std::size_t> k_sweep;
  std::optional<FeatureScheme> sweep_scheme;
  std::vector<std::string> sweep_targets;  // empty = every target

  // [knn], [forest]
  KnnConfig knn;
  ForestConfig forest;

  // [target:NAME]
  std::map<std::string, TargetOverride> overrides;

  KnnConfig knn_for(const std::string& target) const;
  ForestConfig forest_for(const std::string& target) const;

  /// Throws stance::Error naming the first problem: missing paths,
  /// no schemes or learners, a scheme whose inputs are not configured.
  void validate() const;
};

/// Reads an INI-style file of `[section]` headers and `key = value` lines.
/// Relative paths are resolved against the file's directory.
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
ExperimentConfig parse_experiment_config(const std::string& content,
                                         const std::filesystem::path& base_dir = {});

}  // namespace stance
