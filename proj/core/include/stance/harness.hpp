#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stance/config.hpp"
#include "stance/labels.hpp"

namespace stance {

struct ResultRow {
  std::string target;
  FeatureScheme scheme = FeatureScheme::Bow3Pos;
  Learner learner = Learner::Knn;
  double accuracy = 0;
  double majority_baseline = 0;
  std::size_t n_test = 0;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct ResultsTable {
  std::vector<ResultRow> rows;
};

struct KSweep {
  std::string target;
  FeatureScheme scheme = FeatureScheme::Bow3Pos;
  std::vector<std::pair<std::size_t, double>> points;
};

struct ExperimentResult {
  ResultsTable table;
  std::vector<KSweep> sweeps;
  /// Human-readable notes (skipped targets, missing sentiment counts).
  std::vector<std::string> notes;
};

/// Fraction of exact matches. Throws on empty or unequal-length input.
double accuracy(std::span<const StanceLabel> predictions, std::span<const StanceLabel> gold);

/// Per target: tag, build the vocabulary from the training split only,
/// vectorise both splits, train and score every (scheme, learner) pair.
/// The majority baseline comes from the test split. The result depends
/// only on the configuration and the input files, never on `threads`.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// "69.68%"
std::string format_percent(double fraction);

/// CSV: header plus one line per row. Markdown: one line per target with a
/// "Majority Class" column followed by one column per (scheme, learner).
std::string format_report(const ResultsTable& table, ReportFormat format);
void emit_report(const ResultsTable& table, ReportFormat format, const std::filesystem::path& path);

/// Two-column "k,accuracy" CSV in input order.
std::string format_k_sweep(std::span<const std::pair<std::size_t, double>> points);
void emit_k_sweep(std::span<const std::pair<std::size_t, double>> points,
                  const std::filesystem::path& path);

/// File-name-safe form of a target ("Climate Change is a Real Concern" ->
/// "climate_change_is_a_real_concern").
std::string slugify(std::string_view target);

/// Writes results.{csv,md}, one k_sweep_<target>_<scheme>.csv per sweep,
/// and notes.txt into `config.output_dir`. Returns the report path.
std::filesystem::path write_experiment_outputs(const ExperimentResult& result,
                                               const ExperimentConfig& config);

/// Tokenises and tags every tweet; tweets without tokens map to an empty
/// sentence. Work is spread over `threads` without affecting the result.
std::vector<TaggedSentence> tag_corpus(const Corpus& corpus, const TagModel& model,
                                       const TokenizerOptions& tokenizer,
                                       const ViterbiOptions& viterbi, std::size_t threads = 1);

}  // namespace stance
