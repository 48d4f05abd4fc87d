#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stance/conll.hpp"
#include "stance/labels.hpp"
#include "stance/lexicons.hpp"
#include "stance/tagger.hpp"

namespace stance {

enum class FeatureScheme : std::uint8_t {
  Bow3Pos,           // nouns, verbs and adjectives, binary presence
  BowAll,            // every token, binary presence
  Bow3PosSentiment,  // Bow3Pos followed by a one-hot sentiment
  MpqaWeighted,      // every token, valued by MPQA prior polarity
  ArguingBinary,     // every token, 1 only when it matches the arguing lexicon
  DepTriples,        // dependency triples, binary presence
};

inline constexpr FeatureScheme kAllSchemes[] = {
    FeatureScheme::Bow3Pos,      FeatureScheme::BowAll,        FeatureScheme::Bow3PosSentiment,
    FeatureScheme::MpqaWeighted, FeatureScheme::ArguingBinary, FeatureScheme::DepTriples};

std::string_view to_string(FeatureScheme s) noexcept;
/// Accepts the upper-case names (BOW_3POS, BOW_ALL, BOW_3POS_SENTIMENT,
/// MPQA_WEIGHTED, ARGUING_BINARY, DEP_TRIPLES), case-insensitively.
std::optional<FeatureScheme> parse_scheme(std::string_view s);

constexpr bool uses_triples(FeatureScheme s) noexcept { return s == FeatureScheme::DepTriples; }

/// The twelve Penn tags kept by the part-of-speech filter.
bool is_content_tag(std::string_view tag) noexcept;

/// Sorted, duplicate-free feature names for one scheme.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(FeatureScheme scheme, std::vector<std::string> names);

  FeatureScheme scheme() const noexcept { return scheme_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::size_t size() const noexcept { return names_.size(); }
  /// Number of values in a vector of this vocabulary (names, plus three
  /// sentiment positions for Bow3PosSentiment).
  std::size_t vector_length() const noexcept;
  std::optional<std::size_t> find(std::string_view name) const;

  friend bool operator==(const Vocabulary&, const Vocabulary&) = default;

 private:
  FeatureScheme scheme_ = FeatureScheme::BowAll;
  std::vector<std::string> names_;
};

struct FeatureVector {
  std::vector<std::int8_t> values;
  StanceLabel label = StanceLabel::None;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Feature names a tagged tweet contributes under a token-based scheme.
std::vector<std::string> feature_terms(const TaggedSentence& tweet, FeatureScheme scheme);

/// Vocabulary from training tweets. Throws on empty input or when the input
/// kind does not fit the scheme.
Vocabulary build_vocab(std::span<const TaggedSentence> tweets, FeatureScheme scheme);
Vocabulary build_vocab(std::span<const std::vector<DepTriple>> tweets,
                       FeatureScheme scheme = FeatureScheme::DepTriples);

struct VectorizeOptions {
  /// For MpqaWeighted: words present in the tweet but unmatched in the
  /// lexicon score 1 instead of 0.
  bool mpqa_presence_fallback = false;
};

/// Turns tweets into vectors over a fixed vocabulary. Lexicon lookups are
/// done once per vocabulary entry at construction. Words outside the
/// vocabulary are ignored.
class Vectorizer {
 public:
  Vectorizer(Vocabulary vocab, const MpqaLexicon* mpqa = nullptr,
             const ArguingLexicon* arguing = nullptr, VectorizeOptions options = {});

  const Vocabulary& vocabulary() const noexcept { return vocab_; }

  FeatureVector operator()(const TaggedSentence& tweet, StanceLabel label,
                           std::optional<SentimentLabel> sentiment = std::nullopt) const;
  FeatureVector operator()(std::span<const DepTriple> tweet, StanceLabel label) const;

 private:
  Vocabulary vocab_;
  std::vector<std::int8_t> present_value_;  // value written when a name is present
};

/// One-shot form of Vectorizer for a single tweet.
FeatureVector vectorize(const TaggedSentence& tweet, const Vocabulary& vocab, StanceLabel label,
                        const MpqaLexicon* mpqa = nullptr, const ArguingLexicon* arguing = nullptr,
                        std::optional<SentimentLabel> sentiment = std::nullopt,
                        VectorizeOptions options = {});
FeatureVector vectorize(std::span<const DepTriple> tweet, const Vocabulary& vocab, StanceLabel label);

/// TiMBL-style data file: one "v1,v2,...,LABEL" line per vector. Feature
/// names go to the sidecar `<path>.names`, one per line, after a
/// "#scheme NAME" line.
void write_feature_file(std::span<const FeatureVector> vectors, const Vocabulary& vocab,
                        const std::filesystem::path& path);
std::pair<Vocabulary, std::vector<FeatureVector>> read_feature_file(const std::filesystem::path& path);

std::filesystem::path names_path(const std::filesystem::path& data_path);
std::string format_feature_rows(std::span<const FeatureVector> vectors);
std::vector<FeatureVector> parse_feature_rows(std::string_view content, std::size_t expected_length,
                                              const std::string& source_name = {});

}  // namespace stance
