#include "stance/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "stance/error.hpp"
#include "stance/text_io.hpp"

namespace stance {
namespace {

struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;
};

// Splits delimited content into records. Comma files honour double-quoted
// fields, which may contain the delimiter, newlines and "" escapes.
std::vector<Record> split_records(std::string_view content, char delim,
                                  const std::string& source) {
  std::vector<Record> records;
  const bool quoting = delim == ',';
  std::size_t line = 1;
  std::size_t i = 0;
  while (i < content.size()) {
    Record rec;
    rec.line = line;
    std::string field;
    bool in_quotes = false;
    bool done = false;
    while (!done) {
      if (i >= content.size()) {
        if (in_quotes) throw ParseError(source, rec.line, "unterminated quoted field");
        rec.fields.push_back(std::move(field));
        done = true;
        break;
      }
      const char c = content[i];
      if (in_quotes) {
        if (c == '"') {
          if (i + 1 < content.size() && content[i + 1] == '"') {
            field.push_back('"');
            i += 2;
          } else {
            in_quotes = false;
            ++i;
          }
        } else {
          if (c == '\n') ++line;
          field.push_back(c);
          ++i;
        }
        continue;
      }
      if (quoting && c == '"' && field.empty()) {
        in_quotes = true;
        ++i;
      } else if (c == delim) {
        rec.fields.push_back(std::move(field));
        field.clear();
        ++i;
      } else if (c == '\n' || c == '\r') {
        rec.fields.push_back(std::move(field));
        if (c == '\r' && i + 1 < content.size() && content[i + 1] == '\n') ++i;
        ++i;
        ++line;
        done = true;
      } else {
        field.push_back(c);
        ++i;
      }
    }
    // Blank lines carry no record.
    if (rec.fields.size() == 1 && rec.fields[0].empty()) continue;
    records.push_back(std::move(rec));
  }
  return records;
}

std::string quote_if_needed(const std::string& s, char delim) {
  if (delim != ',') {
    if (s.find_first_of("\t\n\r") != std::string::npos)
      throw Error("field contains a tab or newline and cannot be written as TSV: " + s);
    return s;
  }
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::size_t parse_index(std::string_view v, std::string_view key) {
  std::size_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw Error("column spec: bad index for '" + std::string(key) + "': " + std::string(v));
  return out;
}

}  // namespace

ColumnSpec ColumnSpec::parse(std::string_view text) {
  ColumnSpec spec;
  auto rest = text;
  if (rest == "tsv" || rest == "csv") {
    spec.delimiter = rest == "tsv" ? '\t' : ',';
    return spec;
  }
  if (auto colon = rest.find(':'); colon != std::string_view::npos) {
    const auto kind = rest.substr(0, colon);
    if (kind == "tsv") spec.delimiter = '\t';
    else if (kind == "csv") spec.delimiter = ',';
    else throw Error("column spec: unknown delimiter kind '" + std::string(kind) + "'");
    rest.remove_prefix(colon + 1);
  }
  for (const auto& item : split_view(rest, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos)
      throw Error("column spec: expected key=index, got '" + std::string(item) + "'");
    const auto key = trim(item.substr(0, eq));
    const auto idx = parse_index(trim(item.substr(eq + 1)), key);
    if (key == "id") spec.id = idx;
    else if (key == "target") spec.target = idx;
    else if (key == "text") spec.text = idx;
    else if (key == "stance") spec.stance = idx;
    else if (key == "sentiment") spec.sentiment = idx;
    else throw Error("column spec: unknown key '" + std::string(key) + "'");
  }
  return spec;
}

std::string ColumnSpec::to_string() const {
  std::ostringstream os;
  os << (delimiter == ',' ? "csv" : "tsv") << ":id=" << id << ",target=" << target
     << ",text=" << text << ",stance=" << stance;
  if (sentiment) os << ",sentiment=" << *sentiment;
  return os.str();
}

std::size_t ColumnSpec::min_columns() const noexcept {
  std::size_t m = std::max({id, target, text, stance});
  if (sentiment) m = std::max(m, *sentiment);
  return m + 1;
}

Corpus::Corpus(std::vector<Tweet> tweets) : tweets_(std::move(tweets)) {
  for (const auto& t : tweets_) targets_.insert(t.target);
}

LabelCounts Corpus::stance_counts() const noexcept {
  LabelCounts c{};
  for (const auto& t : tweets_) ++c[index_of(t.stance)];
  return c;
}

Corpus parse_corpus(std::string_view content, const ColumnSpec& columns,
                    const std::string& source_name) {
  const auto records = split_records(content, columns.delimiter, source_name);
  if (records.empty()) return Corpus{};

  const std::size_t width = records.front().fields.size();
  if (width < columns.min_columns())
    throw ParseError(source_name, records.front().line,
                     "header has " + std::to_string(width) + " columns, column spec needs " +
                         std::to_string(columns.min_columns()));

  std::vector<Tweet> tweets;
  tweets.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != width)
      throw ParseError(source_name, rec.line,
                       "row " + std::to_string(r) + " has " + std::to_string(rec.fields.size()) +
                           " columns, expected " + std::to_string(width));
    Tweet t;
    t.id = rec.fields[columns.id];
    t.target = rec.fields[columns.target];
    t.text = rec.fields[columns.text];
    if (t.id.empty()) throw ParseError(source_name, rec.line, "empty tweet id");
    if (t.text.empty()) throw ParseError(source_name, rec.line, "empty tweet text");
    const auto stance = parse_stance(trim(rec.fields[columns.stance]));
    if (!stance)
      throw ParseError(source_name, rec.line,
                       "unknown stance label '" + rec.fields[columns.stance] + "'");
    t.stance = *stance;
    if (columns.sentiment) {
      const auto raw = trim(rec.fields[*columns.sentiment]);
      if (!raw.empty()) {
        const auto s = parse_sentiment(raw);
        if (!s) throw ParseError(source_name, rec.line,
                                 "unknown sentiment label '" + std::string(raw) + "'");
        t.sentiment = *s;
      }
    }
    tweets.push_back(std::move(t));
  }
  return Corpus(std::move(tweets));
}

Corpus load_corpus(const std::filesystem::path& path, const ColumnSpec& columns) {
  return parse_corpus(read_file(path), columns, path.string());
}

std::string format_corpus(const Corpus& corpus, const ColumnSpec& columns) {
  const std::size_t width = columns.min_columns();
  std::vector<std::string> header(width);
  header[columns.id] = "ID";
  header[columns.target] = "Target";
  header[columns.text] = "Tweet";
  header[columns.stance] = "Stance";
  if (columns.sentiment) header[*columns.sentiment] = "Sentiment";

  std::string out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out.push_back(columns.delimiter);
      out += quote_if_needed(row[i], columns.delimiter);
    }
    out.push_back('\n');
  };
  emit(header);
  for (const auto& t : corpus.tweets()) {
    std::vector<std::string> row(width);
    row[columns.id] = t.id;
    row[columns.target] = t.target;
    row[columns.text] = t.text;
    row[columns.stance] = std::string(to_string(t.stance));
    if (columns.sentiment && t.sentiment) row[*columns.sentiment] = std::string(to_string(*t.sentiment));
    emit(row);
  }
  return out;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path,
                 const ColumnSpec& columns) {
  write_file(path, format_corpus(corpus, columns));
}

std::map<std::string, Corpus> split_by_target(const Corpus& corpus) {
  std::map<std::string, std::vector<Tweet>> buckets;
  for (const auto& t : corpus.tweets()) buckets[t.target].push_back(t);
  std::map<std::string, Corpus> out;
  for (auto& [target, tweets] : buckets) out.emplace(target, Corpus(std::move(tweets)));
  return out;
}

std::pair<StanceLabel, double> majority_class(const Corpus& corpus) {
  if (corpus.empty()) throw Error("majority_class: empty corpus");
  const auto counts = corpus.stance_counts();
  const auto label = argmax_label(counts);
  return {label, static_cast<double>(counts[index_of(label)]) /
                     static_cast<double>(corpus.size())};
}

}  // namespace stance
