#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stance/labels.hpp"

namespace stance {

struct Tweet {
  std::string id;
  std::string target;
  std::string text;
  StanceLabel stance = StanceLabel::None;
  std::optional<SentimentLabel> sentiment;

  /// Sentiment with the OTHER fallback for corpora without the column.
  SentimentLabel sentiment_or_other() const noexcept {
    return sentiment.value_or(SentimentLabel::Other);
  }

  friend bool operator==(const Tweet&, const Tweet&) = default;
};

/// Which delimited columns hold which field. Indices are 0-based.
struct ColumnSpec {
  char delimiter = '\t';
  std::size_t id = 0;
  std::size_t target = 1;
  std::size_t text = 2;
  std::size_t stance = 3;
  std::optional<std::size_t> sentiment;

  /// Layout of the SemEval-2016 stance files: ID, Target, Tweet, Stance.
  static ColumnSpec semeval() { return {}; }

  /// Parses "tsv:id=0,target=1,text=2,stance=3,sentiment=5". The leading
  /// "tsv:" or "csv:" picks the delimiter; omitted keys keep defaults.
  static ColumnSpec parse(std::string_view text);
  std::string to_string() const;

  std::size_t min_columns() const noexcept;
};

class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<Tweet> tweets);

  const std::vector<Tweet>& tweets() const noexcept { return tweets_; }
  const std::set<std::string>& targets() const noexcept { return targets_; }
  std::size_t size() const noexcept { return tweets_.size(); }
  bool empty() const noexcept { return tweets_.empty(); }

  LabelCounts stance_counts() const noexcept;

  friend bool operator==(const Corpus&, const Corpus&) = default;

 private:
  std::vector<Tweet> tweets_;
  std::set<std::string> targets_;
};

/// Reads a delimited file with one header row. Comma-delimited files may
/// quote fields ("a, b" with "" as an escaped quote).
Corpus load_corpus(const std::filesystem::path& path, const ColumnSpec& columns);
Corpus parse_corpus(std::string_view content, const ColumnSpec& columns,
                    const std::string& source_name = {});

/// Writes the corpus in the layout described by `columns`.
void save_corpus(const Corpus& corpus, const std::filesystem::path& path,
                 const ColumnSpec& columns);
std::string format_corpus(const Corpus& corpus, const ColumnSpec& columns);

std::map<std::string, Corpus> split_by_target(const Corpus& corpus);

/// Most frequent stance and its relative frequency. Throws on empty corpus.
std::pair<StanceLabel, double> majority_class(const Corpus& corpus);

}  // namespace stance
