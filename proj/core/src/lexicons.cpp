#include "stance/lexicons.hpp"

#include <set>

#include "stance/error.hpp"
#include "stance/porter.hpp"
#include "stance/text_io.hpp"

namespace stance {

// MPQA ---------------------------------------------------------------------

MpqaLexicon::MpqaLexicon(std::vector<MpqaEntry> entries) : size_(entries.size()) {
  for (auto& e : entries) {
    if (e.is_stemmed) by_stem_[porter_stem(e.word)].push_back(e);
    by_word_[e.word].push_back(std::move(e));
  }
}

std::span<const MpqaEntry> MpqaLexicon::lookup_stemmed(std::string_view stem) const {
  auto it = by_stem_.find(std::string(stem));
  if (it == by_stem_.end()) return {};
  return it->second;
}

std::span<const MpqaEntry> MpqaLexicon::lookup(std::string_view word) const {
  auto it = by_word_.find(std::string(word));
  if (it == by_word_.end()) return {};
  return it->second;
}

MpqaLexicon parse_mpqa_text(std::string_view content, const std::string& source_name) {
  std::vector<MpqaEntry> entries;
  std::size_t lineno = 0;
  for (auto line : split_lines(content)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;

    std::map<std::string_view, std::string_view> kv;
    for (auto field : split_view(line, ' ')) {
      field = trim(field);
      const auto eq = field.find('=');
      // The public distribution contains a few stray tokens without '='.
      if (eq == std::string_view::npos) continue;
      kv[field.substr(0, eq)] = field.substr(eq + 1);
    }
    auto get = [&](std::string_view key) -> std::string_view {
      auto it = kv.find(key);
      return it == kv.end() ? std::string_view{} : it->second;
    };

    MpqaEntry e;
    e.word = std::string(get("word1"));
    if (e.word.empty()) throw ParseError(source_name, lineno, "missing word1");
    const auto pol = get("priorpolarity");
    if (pol.empty()) throw ParseError(source_name, lineno, "missing priorpolarity");
    if (pol == "positive") e.polarity = Polarity::Positive;
    else if (pol == "negative") e.polarity = Polarity::Negative;
    else if (pol == "neutral") e.polarity = Polarity::Neutral;
    else if (pol == "both") e.polarity = Polarity::Both;
    else throw ParseError(source_name, lineno, "unknown polarity '" + std::string(pol) + "'");

    const auto type = get("type");
    if (type == "strongsubj") e.strength = Strength::Strong;
    else if (type.empty() || type == "weaksubj") e.strength = Strength::Weak;
    else throw ParseError(source_name, lineno, "unknown subjectivity type '" + std::string(type) + "'");

    e.pos = std::string(get("pos1"));
    e.is_stemmed = get("stemmed1") == "y";
    entries.push_back(std::move(e));
  }
  return MpqaLexicon(std::move(entries));
}

MpqaLexicon parse_mpqa(const std::filesystem::path& path) {
  return parse_mpqa_text(read_file(path), path.string());
}

namespace {

int resolve_polarity(const std::vector<const MpqaEntry*>& matched) {
  bool any_strong = false;
  for (const auto* e : matched) any_strong |= e->strength == Strength::Strong;
  bool pos = false;
  bool neg = false;
  for (const auto* e : matched) {
    if (any_strong && e->strength != Strength::Strong) continue;
    pos |= e->polarity == Polarity::Positive;
    neg |= e->polarity == Polarity::Negative;
  }
  if (pos && !neg) return 1;
  if (neg && !pos) return -1;
  return 0;
}

}  // namespace

int lookup_polarity(const MpqaLexicon& lex, std::string_view word) {
  if (word.empty()) return 0;
  std::vector<const MpqaEntry*> matched;
  for (const auto& e : lex.lookup(word))
    if (!e.is_stemmed) matched.push_back(&e);
  if (!matched.empty()) return resolve_polarity(matched);

  // Stemmed entries cover every inflection sharing the entry's stem.
  for (const auto& e : lex.lookup_stemmed(porter_stem(word))) matched.push_back(&e);
  return resolve_polarity(matched);
}

// Arguing ------------------------------------------------------------------

ArguingLexicon::ArguingLexicon(std::vector<ArguingPattern> patterns,
                               std::map<std::string, std::string> macros)
    : patterns_(std::move(patterns)), macros_(std::move(macros)) {}

std::vector<std::string> ArguingLexicon::categories() const {
  std::set<std::string> cats;
  for (const auto& p : patterns_) cats.insert(p.category);
  return {cats.begin(), cats.end()};
}

namespace {

bool is_name_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

std::string normalize_alternation(std::string_view value) {
  value = trim(value);
  if (value.size() >= 2 && value.front() == '{' && value.back() == '}') {
    std::string out = "(";
    bool first = true;
    for (auto alt : split_view(value.substr(1, value.size() - 2), ',')) {
      alt = trim(alt);
      if (alt.empty()) continue;
      if (!first) out.push_back('|');
      out.append(alt);
      first = false;
    }
    out.push_back(')');
    return out;
  }
  return std::string(value);
}

std::string expand_rec(std::string_view pattern, const std::map<std::string, std::string>& macros,
                       std::set<std::string>& active) {
  std::string out;
  for (std::size_t i = 0; i < pattern.size();) {
    if (pattern[i] != '@') {
      out.push_back(pattern[i++]);
      continue;
    }
    std::size_t j = i + 1;
    while (j < pattern.size() && is_name_char(pattern[j])) ++j;
    const std::string name(pattern.substr(i + 1, j - i - 1));
    if (name.empty()) throw Error("dangling '@' in arguing pattern: " + std::string(pattern));
    auto it = macros.find(name);
    if (it == macros.end()) throw Error("undefined macro @" + name);
    if (active.contains(name)) throw Error("cyclic macro @" + name);
    active.insert(name);
    out += expand_rec(it->second, macros, active);
    active.erase(name);
    i = j;
  }
  return out;
}

}  // namespace

std::string expand_macros(std::string_view pattern, const std::map<std::string, std::string>& macros) {
  std::set<std::string> active;
  return expand_rec(pattern, macros, active);
}

std::map<std::string, std::string> parse_arguing_macros(std::string_view content,
                                                        const std::string& source_name) {
  std::map<std::string, std::string> macros;
  std::size_t lineno = 0;
  for (auto line : split_lines(content)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (line.front() != '@')
      throw ParseError(source_name, lineno, "expected @NAME=... macro definition");
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(source_name, lineno, "macro definition without '='");
    const auto name = trim(line.substr(1, eq - 1));
    if (name.empty()) throw ParseError(source_name, lineno, "empty macro name");
    for (char c : name)
      if (!is_name_char(c)) throw ParseError(source_name, lineno, "bad macro name '" + std::string(name) + "'");
    macros[std::string(name)] = normalize_alternation(line.substr(eq + 1));
  }
  return macros;
}

ArguingLexicon parse_arguing(std::span<const std::filesystem::path> pattern_paths,
                             std::span<const std::filesystem::path> macro_paths) {
  std::map<std::string, std::string> macros;
  for (const auto& path : macro_paths)
    for (auto& [name, value] : parse_arguing_macros(read_file(path), path.string()))
      macros[name] = std::move(value);

  std::vector<ArguingPattern> patterns;
  for (const auto& path : pattern_paths) {
    const auto content = read_file(path);
    const auto category = path.stem().string();
    std::size_t lineno = 0;
    for (auto line : split_lines(content)) {
      ++lineno;
      line = trim(line);
      if (line.empty() || line.front() == '#') continue;
      ArguingPattern p;
      p.category = category;
      try {
        p.source = expand_macros(line, macros);
      } catch (const Error& e) {
        throw ParseError(path.string(), lineno, e.what());
      }
      try {
        p.regex = std::regex(p.source, std::regex::ECMAScript | std::regex::icase | std::regex::optimize);
      } catch (const std::regex_error& e) {
        throw ParseError(path.string(), lineno, "pattern does not compile: " + p.source + " (" + e.what() + ")");
      }
      patterns.push_back(std::move(p));
    }
  }
  return ArguingLexicon(std::move(patterns), std::move(macros));
}

bool match_arguing(const ArguingLexicon& lex, std::string_view word) {
  if (word.empty()) return false;
  const std::string w(word);
  for (const auto& p : lex.patterns()) {
    const bool hit = lex.mode == ArguingMatchMode::WholeWord ? std::regex_match(w, p.regex)
                                                             : std::regex_search(w, p.regex);
    if (hit) return true;
  }
  return false;
}

}  // namespace stance
