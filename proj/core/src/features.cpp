#include "stance/features.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "stance/error.hpp"
#include "stance/text_io.hpp"

namespace stance {

std::string_view to_string(FeatureScheme s) noexcept {
  switch (s) {
    case FeatureScheme::Bow3Pos: return "BOW_3POS";
    case FeatureScheme::BowAll: return "BOW_ALL";
    case FeatureScheme::Bow3PosSentiment: return "BOW_3POS_SENTIMENT";
    case FeatureScheme::MpqaWeighted: return "MPQA_WEIGHTED";
    case FeatureScheme::ArguingBinary: return "ARGUING_BINARY";
    case FeatureScheme::DepTriples: return "DEP_TRIPLES";
  }
  return "?";
}

std::optional<FeatureScheme> parse_scheme(std::string_view s) {
  std::string u(trim(s));
  for (auto& c : u) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (auto scheme : kAllSchemes)
    if (to_string(scheme) == u) return scheme;
  return std::nullopt;
}

bool is_content_tag(std::string_view tag) noexcept {
  static constexpr std::string_view kTags[] = {"JJ", "JJR", "JJS", "NN",  "NNS", "NNP",
                                               "VB", "VBD", "VBG", "VBN", "VBP", "VBZ"};
  return std::find(std::begin(kTags), std::end(kTags), tag) != std::end(kTags);
}

Vocabulary::Vocabulary(FeatureScheme scheme, std::vector<std::string> names)
    : scheme_(scheme), names_(std::move(names)) {
  std::sort(names_.begin(), names_.end());
  names_.erase(std::unique(names_.begin(), names_.end()), names_.end());
}

std::size_t Vocabulary::vector_length() const noexcept {
  return names_.size() + (scheme_ == FeatureScheme::Bow3PosSentiment ? 3 : 0);
}

std::optional<std::size_t> Vocabulary::find(std::string_view name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it == names_.end() || *it != name) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

std::vector<std::string> feature_terms(const TaggedSentence& tweet, FeatureScheme scheme) {
  if (uses_triples(scheme)) throw Error("DEP_TRIPLES features come from dependency triples, not tagged tokens");
  const bool filter = scheme == FeatureScheme::Bow3Pos || scheme == FeatureScheme::Bow3PosSentiment;
  std::vector<std::string> out;
  for (const auto& tok : tweet)
    if (!filter || is_content_tag(tok.tag)) out.push_back(tok.token);
  return out;
}

Vocabulary build_vocab(std::span<const TaggedSentence> tweets, FeatureScheme scheme) {
  if (tweets.empty()) throw Error("build_vocab: no training tweets");
  std::set<std::string> names;
  for (const auto& t : tweets)
    for (auto& term : feature_terms(t, scheme)) names.insert(std::move(term));
  return Vocabulary(scheme, {names.begin(), names.end()});
}

Vocabulary build_vocab(std::span<const std::vector<DepTriple>> tweets, FeatureScheme scheme) {
  if (!uses_triples(scheme))
    throw Error("build_vocab: dependency triples given for scheme " + std::string(to_string(scheme)));
  if (tweets.empty()) throw Error("build_vocab: no training tweets");
  std::set<std::string> names;
  for (const auto& t : tweets)
    for (const auto& triple : t) names.insert(triple.feature_name());
  return Vocabulary(scheme, {names.begin(), names.end()});
}

Vectorizer::Vectorizer(Vocabulary vocab, const MpqaLexicon* mpqa, const ArguingLexicon* arguing,
                       VectorizeOptions options)
    : vocab_(std::move(vocab)), present_value_(vocab_.size(), 1) {
  switch (vocab_.scheme()) {
    case FeatureScheme::MpqaWeighted:
      if (!mpqa) throw Error("MPQA_WEIGHTED needs an MPQA lexicon");
      for (std::size_t i = 0; i < vocab_.size(); ++i) {
        const int v = lookup_polarity(*mpqa, vocab_.names()[i]);
        present_value_[i] = static_cast<std::int8_t>(v == 0 && options.mpqa_presence_fallback ? 1 : v);
      }
      break;
    case FeatureScheme::ArguingBinary:
      if (!arguing) throw Error("ARGUING_BINARY needs an arguing lexicon");
      for (std::size_t i = 0; i < vocab_.size(); ++i)
        present_value_[i] = match_arguing(*arguing, vocab_.names()[i]) ? 1 : 0;
      break;
    default: break;
  }
}

FeatureVector Vectorizer::operator()(const TaggedSentence& tweet, StanceLabel label,
                                     std::optional<SentimentLabel> sentiment) const {
  const auto scheme = vocab_.scheme();
  if (scheme == FeatureScheme::Bow3PosSentiment && !sentiment)
    throw Error("BOW_3POS_SENTIMENT needs the tweet's sentiment");
  FeatureVector fv;
  fv.label = label;
  fv.values.assign(vocab_.vector_length(), 0);
  for (const auto& term : feature_terms(tweet, scheme))
    if (auto idx = vocab_.find(term)) fv.values[*idx] = present_value_[*idx];
  if (scheme == FeatureScheme::Bow3PosSentiment)
    fv.values[vocab_.size() + static_cast<std::size_t>(*sentiment)] = 1;
  return fv;
}

FeatureVector Vectorizer::operator()(std::span<const DepTriple> tweet, StanceLabel label) const {
  if (!uses_triples(vocab_.scheme()))
    throw Error("dependency triples given for scheme " + std::string(to_string(vocab_.scheme())));
  FeatureVector fv;
  fv.label = label;
  fv.values.assign(vocab_.vector_length(), 0);
  for (const auto& t : tweet)
    if (auto idx = vocab_.find(t.feature_name())) fv.values[*idx] = 1;
  return fv;
}

FeatureVector vectorize(const TaggedSentence& tweet, const Vocabulary& vocab, StanceLabel label,
                        const MpqaLexicon* mpqa, const ArguingLexicon* arguing,
                        std::optional<SentimentLabel> sentiment, VectorizeOptions options) {
  return Vectorizer(vocab, mpqa, arguing, options)(tweet, label, sentiment);
}

FeatureVector vectorize(std::span<const DepTriple> tweet, const Vocabulary& vocab, StanceLabel label) {
  return Vectorizer(vocab)(tweet, label);
}

// Feature files -------------------------------------------------------------

std::filesystem::path names_path(const std::filesystem::path& data_path) {
  auto p = data_path;
  p += ".names";
  return p;
}

std::string format_feature_rows(std::span<const FeatureVector> vectors) {
  std::string out;
  for (const auto& v : vectors) {
    for (auto x : v.values) {
      out += std::to_string(static_cast<int>(x));
      out.push_back(',');
    }
    out += to_string(v.label);
    out.push_back('\n');
  }
  return out;
}

std::vector<FeatureVector> parse_feature_rows(std::string_view content, std::size_t expected_length,
                                              const std::string& source_name) {
  std::vector<FeatureVector> out;
  std::size_t lineno = 0;
  for (auto line : split_lines(content)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split_view(line, ',');
    if (fields.size() != expected_length + 1)
      throw ParseError(source_name, lineno,
                       "row has " + std::to_string(fields.size() - 1) + " values, expected " +
                           std::to_string(expected_length));
    FeatureVector fv;
    fv.values.reserve(expected_length);
    for (std::size_t i = 0; i < expected_length; ++i) {
      const auto f = trim(fields[i]);
      int v = 0;
      auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (f.empty() || ec != std::errc{} || p != f.data() + f.size() || v < -1 || v > 1)
        throw ParseError(source_name, lineno, "bad feature value '" + std::string(f) + "'");
      fv.values.push_back(static_cast<std::int8_t>(v));
    }
    const auto label = parse_stance(trim(fields.back()));
    if (!label) throw ParseError(source_name, lineno, "bad class label '" + std::string(fields.back()) + "'");
    fv.label = *label;
    out.push_back(std::move(fv));
  }
  return out;
}

void write_feature_file(std::span<const FeatureVector> vectors, const Vocabulary& vocab,
                        const std::filesystem::path& path) {
  for (const auto& v : vectors)
    if (v.values.size() != vocab.vector_length())
      throw Error("feature vector of length " + std::to_string(v.values.size()) +
                  " does not match vocabulary length " + std::to_string(vocab.vector_length()));
  std::string header = "#scheme " + std::string(to_string(vocab.scheme())) + "\n";
  for (const auto& n : vocab.names()) header += n + "\n";
  write_file(names_path(path), header);
  write_file(path, format_feature_rows(vectors));
}

std::pair<Vocabulary, std::vector<FeatureVector>> read_feature_file(const std::filesystem::path& path) {
  const auto header_path = names_path(path);
  const auto header = read_file(header_path);
  auto lines = split_lines(header);
  if (lines.empty() || !lines.front().starts_with("#scheme "))
    throw ParseError(header_path.string(), 1, "missing '#scheme NAME' line");
  const auto scheme = parse_scheme(lines.front().substr(8));
  if (!scheme) throw ParseError(header_path.string(), 1, "unknown scheme");
  std::vector<std::string> names;
  for (std::size_t i = 1; i < lines.size(); ++i) names.emplace_back(lines[i]);
  Vocabulary vocab(*scheme, std::move(names));
  auto rows = parse_feature_rows(read_file(path), vocab.vector_length(), path.string());
  return {std::move(vocab), std::move(rows)};
}

}  // namespace stance
