#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace stance {

struct ConllToken {
  std::size_t index = 1;
  std::string form;
  std::string lemma;
  std::string pos;
  std::size_t head = 0;  // 0 = root
  std::string deprel;

  friend bool operator==(const ConllToken&, const ConllToken&) = default;
};

using ConllSentence = std::vector<ConllToken>;

/// Column positions (0-based) of the fields we read, plus the exact number
/// of tab-separated columns every token line must have.
struct ConllColumns {
  std::size_t index = 0;
  std::size_t form = 1;
  std::size_t lemma = 2;
  std::size_t pos = 4;
  std::size_t head = 6;
  std::size_t deprel = 7;
  std::size_t width = 10;

  /// ID FORM LEMMA CPOSTAG POSTAG FEATS HEAD DEPREL PHEAD PDEPREL
  static ConllColumns conll_x() { return {}; }
  /// idx word lemma pos ner head deprel, as written by CoreNLP's conll output.
  static ConllColumns corenlp() { return {0, 1, 2, 3, 5, 6, 7}; }
  /// "conllx" or "corenlp".
  static ConllColumns preset(std::string_view name);
};

struct DepTriple {
  std::string dependent;
  std::string head;  // "ROOT" for the syntactic root
  std::string label;

  /// Feature name "dependent|head|label".
  std::string feature_name() const { return dependent + "|" + head + "|" + label; }

  friend bool operator==(const DepTriple&, const DepTriple&) = default;
};

std::vector<ConllSentence> load_conll(const std::filesystem::path& path,
                                      const ConllColumns& columns = {});
std::vector<ConllSentence> parse_conll(std::string_view content, const ConllColumns& columns = {},
                                       const std::string& source_name = {});
/// Writes the sentences in `columns` layout; unused columns hold "_".
std::string format_conll(std::span<const ConllSentence> sentences, const ConllColumns& columns = {});

/// One triple per token, in token order. Forms are lowercased.
std::vector<DepTriple> extract_dep_triples(const ConllSentence& sentence);

/// Sidecar alignment: one non-negative integer per line, the number of
/// parsed sentences that belong to each tweet, in corpus order.
std::vector<std::size_t> load_alignment(const std::filesystem::path& path);
std::vector<std::size_t> parse_alignment(std::string_view content, const std::string& source_name = {});

/// Concatenated triples of every sentence belonging to each tweet. Throws
/// if the sentence counts do not add up.
std::vector<std::vector<DepTriple>> triples_per_tweet(std::span<const ConllSentence> sentences,
                                                      std::span<const std::size_t> sentence_counts);

}  // namespace stance
