#include "stance/conll.hpp"

#include <algorithm>
#include <charconv>

#include "stance/error.hpp"
#include "stance/text_io.hpp"

namespace stance {
namespace {

std::size_t parse_uint(std::string_view v, const std::string& source, std::size_t line,
                       std::string_view what) {
  std::size_t out = 0;
  v = trim(v);
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || p != v.data() + v.size())
    throw ParseError(source, line, std::string(what) + " is not a non-negative integer: '" + std::string(v) + "'");
  return out;
}

}  // namespace

ConllColumns ConllColumns::preset(std::string_view name) {
  if (name == "conllx" || name == "conll-x") return conll_x();
  if (name == "corenlp") return corenlp();
  throw Error("unknown CoNLL column preset '" + std::string(name) + "'");
}

std::vector<ConllSentence> parse_conll(std::string_view content, const ConllColumns& columns,
                                       const std::string& source_name) {
  std::vector<ConllSentence> out;
  ConllSentence cur;
  std::vector<std::size_t> head_lines;

  auto flush = [&] {
    if (cur.empty()) return;
    for (std::size_t i = 0; i < cur.size(); ++i)
      if (cur[i].head > cur.size())
        throw ParseError(source_name, head_lines[i],
                         "head " + std::to_string(cur[i].head) + " outside sentence of length " +
                             std::to_string(cur.size()));
    out.push_back(std::move(cur));
    cur.clear();
    head_lines.clear();
  };

  std::size_t lineno = 0;
  for (auto line : split_lines(content)) {
    ++lineno;
    if (trim(line).empty()) {
      flush();
      continue;
    }
    const auto fields = split_view(line, '\t');
    if (fields.size() != columns.width)
      throw ParseError(source_name, lineno,
                       "expected " + std::to_string(columns.width) + " columns, got " +
                           std::to_string(fields.size()));
    ConllToken tok;
    tok.index = parse_uint(fields[columns.index], source_name, lineno, "token index");
    if (tok.index != cur.size() + 1)
      throw ParseError(source_name, lineno,
                       "token index " + std::to_string(tok.index) + " out of sequence (expected " +
                           std::to_string(cur.size() + 1) + ")");
    tok.form = std::string(fields[columns.form]);
    tok.lemma = std::string(fields[columns.lemma]);
    tok.pos = std::string(fields[columns.pos]);
    tok.head = parse_uint(fields[columns.head], source_name, lineno, "head");
    tok.deprel = std::string(fields[columns.deprel]);
    if (tok.form.empty() || tok.deprel.empty())
      throw ParseError(source_name, lineno, "empty form or dependency label");
    cur.push_back(std::move(tok));
    head_lines.push_back(lineno);
  }
  flush();
  return out;
}

std::vector<ConllSentence> load_conll(const std::filesystem::path& path, const ConllColumns& columns) {
  return parse_conll(read_file(path), columns, path.string());
}

std::string format_conll(std::span<const ConllSentence> sentences, const ConllColumns& columns) {
  std::string out;
  for (const auto& s : sentences) {
    for (const auto& t : s) {
      std::vector<std::string> row(columns.width, "_");
      row[columns.index] = std::to_string(t.index);
      row[columns.form] = t.form;
      row[columns.lemma] = t.lemma;
      row[columns.pos] = t.pos;
      row[columns.head] = std::to_string(t.head);
      row[columns.deprel] = t.deprel;
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out.push_back('\t');
        out += row[i];
      }
      out.push_back('\n');
    }
    out.push_back('\n');
  }
  return out;
}

std::vector<DepTriple> extract_dep_triples(const ConllSentence& sentence) {
  std::vector<DepTriple> out;
  out.reserve(sentence.size());
  for (const auto& tok : sentence) {
    DepTriple t;
    t.dependent = to_lower(tok.form);
    t.head = tok.head == 0 ? std::string("ROOT") : to_lower(sentence.at(tok.head - 1).form);
    t.label = tok.deprel;
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<std::size_t> parse_alignment(std::string_view content, const std::string& source_name) {
  std::vector<std::size_t> out;
  std::size_t lineno = 0;
  for (auto line : split_lines(content)) {
    ++lineno;
    if (trim(line).empty()) continue;
    out.push_back(parse_uint(line, source_name, lineno, "sentence count"));
  }
  return out;
}

std::vector<std::size_t> load_alignment(const std::filesystem::path& path) {
  return parse_alignment(read_file(path), path.string());
}

std::vector<std::vector<DepTriple>> triples_per_tweet(std::span<const ConllSentence> sentences,
                                                      std::span<const std::size_t> sentence_counts) {
  std::size_t total = 0;
  for (auto c : sentence_counts) total += c;
  if (total != sentences.size())
    throw Error("alignment covers " + std::to_string(total) + " sentences but the parse has " +
                std::to_string(sentences.size()));
  std::vector<std::vector<DepTriple>> out;
  out.reserve(sentence_counts.size());
  std::size_t next = 0;
  for (auto c : sentence_counts) {
    std::vector<DepTriple> triples;
    for (std::size_t i = 0; i < c; ++i) {
      auto part = extract_dep_triples(sentences[next++]);
      triples.insert(triples.end(), std::make_move_iterator(part.begin()),
                     std::make_move_iterator(part.end()));
    }
    out.push_back(std::move(triples));
  }
  return out;
}

}  // namespace stance
