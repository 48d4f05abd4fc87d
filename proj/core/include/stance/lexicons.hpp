#pragma once

#include <filesystem>
#include <map>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace stance {

enum class Strength { Weak, Strong };
enum class Polarity { Positive, Negative, Neutral, Both };

struct MpqaEntry {
  std::string word;
  std::string pos;
  bool is_stemmed = false;
  Strength strength = Strength::Weak;
  Polarity polarity = Polarity::Neutral;

  friend bool operator==(const MpqaEntry&, const MpqaEntry&) = default;
};

/// MPQA subjectivity lexicon, indexed by word. A word may carry several
/// entries (different parts of speech, stemmed and unstemmed forms).
class MpqaLexicon {
 public:
  MpqaLexicon() = default;
  explicit MpqaLexicon(std::vector<MpqaEntry> entries);

  std::span<const MpqaEntry> lookup(std::string_view word) const;
  /// Stemmed entries whose Porter stem equals `stem`.
  std::span<const MpqaEntry> lookup_stemmed(std::string_view stem) const;
  std::size_t size() const noexcept { return size_; }

 private:
  std::unordered_map<std::string, std::vector<MpqaEntry>> by_word_;
  std::unordered_map<std::string, std::vector<MpqaEntry>> by_stem_;
  std::size_t size_ = 0;
};

/// Lines of key=value fields: type=, len=, word1=, pos1=, stemmed1=,
/// priorpolarity=. Blank lines and '#' comments are skipped.
MpqaLexicon parse_mpqa(const std::filesystem::path& path);
MpqaLexicon parse_mpqa_text(std::string_view content, const std::string& source_name = {});

/// Polarity score of a word: +1 positive, -1 negative, 0 otherwise.
///
/// The surface form is tried against unstemmed entries first; without a
/// hit, the Porter stem is tried against stemmed entries. When the matched
/// entries disagree, strong entries outrank weak ones and a remaining
/// positive/negative conflict scores 0.
int lookup_polarity(const MpqaLexicon& lex, std::string_view word);

struct ArguingPattern {
  std::string category;
  std::string source;  // text after macro expansion
  std::regex regex;
};

enum class ArguingMatchMode {
  /// The whole word must match a pattern.
  WholeWord,
  /// A pattern may match anywhere inside the text.
  Search,
};

/// Arguing lexicon: regular expressions grouped into categories (one per
/// pattern file) with `@NAME` macros expanded before compilation.
class ArguingLexicon {
 public:
  ArguingLexicon() = default;
  ArguingLexicon(std::vector<ArguingPattern> patterns, std::map<std::string, std::string> macros);

  const std::vector<ArguingPattern>& patterns() const noexcept { return patterns_; }
  const std::map<std::string, std::string>& macros() const noexcept { return macros_; }
  std::vector<std::string> categories() const;

  ArguingMatchMode mode = ArguingMatchMode::WholeWord;

 private:
  std::vector<ArguingPattern> patterns_;
  std::map<std::string, std::string> macros_;
};

/// Macro files hold `@NAME=(alt1|alt2)` or `@NAME={alt1, alt2}` lines.
/// Pattern files hold one regular expression per line; lines starting with
/// '#' are comments. The category is the pattern file's stem.
ArguingLexicon parse_arguing(std::span<const std::filesystem::path> pattern_paths,
                             std::span<const std::filesystem::path> macro_paths);

/// Macro definitions parsed from the text of one macro file.
std::map<std::string, std::string> parse_arguing_macros(std::string_view content,
                                                        const std::string& source_name = {});

/// Replaces every `@NAME` with its alternation (macros may use macros).
/// Throws stance::Error on an undefined or cyclic reference.
std::string expand_macros(std::string_view pattern, const std::map<std::string, std::string>& macros);

bool match_arguing(const ArguingLexicon& lex, std::string_view word);

}  // namespace stance
