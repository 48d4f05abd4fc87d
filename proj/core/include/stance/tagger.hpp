#pragma once

#include <cstdint>
#include <iosfwd>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace stance {

struct TaggedToken {
  std::string token;
  std::string tag;

  friend bool operator==(const TaggedToken&, const TaggedToken&) = default;
};

using TaggedSentence = std::vector<TaggedToken>;

struct TaggerTrainingOptions {
  /// Words seen at most this often feed the suffix model for unknown words.
  std::uint64_t rare_threshold = 2;
  std::size_t max_suffix_length = 10;
};

/// Trigram HMM tagger state in the style of TnT: n-gram tag counts smoothed
/// by deleted interpolation, lexical counts, and a suffix model for unknown
/// words. Immutable after construction.
///
/// Tag indices 0..n-1 are the real tags in lexicographic order; index n is
/// the sentence boundary tag that pads every sentence (two at the start,
/// one at the end).
class TagModel {
 public:
  static constexpr std::string_view kBoundaryTag = "<S>";

  std::size_t num_tags() const noexcept { return real_tags_; }
  std::size_t boundary() const noexcept { return real_tags_; }
  /// Real tags followed by the boundary tag.
  const std::vector<std::string>& tagset() const noexcept { return tags_; }
  const std::string& tag_name(std::size_t t) const { return tags_.at(t); }
  std::size_t tag_index(std::string_view tag) const;

  double lambda1() const noexcept { return lambda_[0]; }
  double lambda2() const noexcept { return lambda_[1]; }
  double lambda3() const noexcept { return lambda_[2]; }
  double theta() const noexcept { return theta_; }

  std::uint64_t unigram_count(std::size_t t) const { return uni_.at(t); }
  std::uint64_t bigram_count(std::size_t t2, std::size_t t3) const;
  std::uint64_t trigram_count(std::size_t t1, std::size_t t2, std::size_t t3) const;
  std::uint64_t emission_count(std::string_view word, std::size_t tag) const;

  /// Smoothed P(t3 | t1, t2). Tags may include the boundary.
  double transition_prob(std::size_t t1, std::size_t t2, std::size_t t3) const;

  /// P(word | tag) for real tags. Unknown words are scored through the
  /// suffix model as P(tag | suffix) / P(tag).
  double emission_prob(std::string_view word, std::size_t tag) const;
  /// emission_prob for every real tag at once.
  std::vector<double> emission_probs(std::string_view word) const;

  bool is_known(std::string_view word) const { return lexicon_.contains(std::string(word)); }

  /// Suffix-smoothed P(tag | word) for an unknown word.
  std::vector<double> suffix_distribution(std::string_view word) const;

  const TaggerTrainingOptions& options() const noexcept { return options_; }

  void save(std::ostream& out) const;
  static TagModel load(std::istream& in);
  void save(const std::filesystem::path& path) const;
  static TagModel load(const std::filesystem::path& path);

  friend TagModel train_tagger(std::span<const TaggedSentence> sentences,
                               const TaggerTrainingOptions& options);

 private:
  TagModel() = default;
  void finalize();  // derived tables from counts
  std::size_t width() const noexcept { return real_tags_ + 1; }

  TaggerTrainingOptions options_;
  std::size_t real_tags_ = 0;
  std::vector<std::string> tags_;
  std::vector<std::uint64_t> uni_;   // t3 positions, boundary included
  std::vector<std::uint64_t> bi_;    // (t2, t3)
  std::vector<std::uint64_t> tri_;   // (t1, t2, t3)
  std::uint64_t positions_ = 0;
  std::unordered_map<std::string, std::vector<std::uint64_t>> lexicon_;
  std::unordered_map<std::string, std::vector<std::uint64_t>> suffixes_;
  double lambda_[3] = {0, 0, 0};
  double theta_ = 0;

  // derived
  std::vector<std::uint64_t> hist1_;  // sum over t3 of bi_(t2, .)
  std::vector<std::uint64_t> hist2_;  // sum over t3 of tri_(t1, t2, .)
  std::vector<double> trans_;         // width^3 smoothed probabilities
  std::vector<double> tag_prior_;     // ML P(t) over real tags
};

/// Deleted-interpolation trainer. Throws stance::Error on a corpus with no
/// nonempty sentence or a tag equal to the reserved boundary name.
TagModel train_tagger(std::span<const TaggedSentence> sentences,
                      const TaggerTrainingOptions& options = {});

struct ViterbiOptions {
  /// Paths scoring below best / beam_factor are pruned at every position.
  /// Zero disables pruning and searches every tag at every position.
  double beam_factor = 1000.0;

  static ViterbiOptions exact() { return ViterbiOptions{0.0}; }
};

/// Best tag sequence under the model. Among paths with equal total score
/// the smaller last tag wins, then the smaller tag before it; after that,
/// walking backwards, the higher score through token i wins, then the
/// smaller tag at i - 2. Throws stance::Error on an empty token list.
std::vector<TaggedToken> tag(const TagModel& model, std::span<const std::string> tokens,
                             const ViterbiOptions& options = {});

/// Two-column `token<TAB>tag` file, blank line between sentences. Lines
/// beginning with "%%" are comments.
std::vector<TaggedSentence> load_tagged(const std::filesystem::path& path);
std::vector<TaggedSentence> parse_tagged(std::string_view content,
                                         const std::string& source_name = {});
std::string format_tagged(std::span<const TaggedSentence> sentences);

}  // namespace stance
