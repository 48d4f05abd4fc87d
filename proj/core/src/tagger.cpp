#include "stance/tagger.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "stance/error.hpp"
#include "stance/text_io.hpp"

namespace stance {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_ratio(double num, double den) { return den > 0 ? num / den : 0.0; }

}  // namespace

std::size_t TagModel::tag_index(std::string_view tag) const {
  for (std::size_t i = 0; i < tags_.size(); ++i)
    if (tags_[i] == tag) return i;
  throw Error("unknown tag: " + std::string(tag));
}

std::uint64_t TagModel::bigram_count(std::size_t t2, std::size_t t3) const {
  return bi_.at(t2 * width() + t3);
}

std::uint64_t TagModel::trigram_count(std::size_t t1, std::size_t t2, std::size_t t3) const {
  return tri_.at((t1 * width() + t2) * width() + t3);
}

std::uint64_t TagModel::emission_count(std::string_view word, std::size_t tag) const {
  auto it = lexicon_.find(std::string(word));
  if (it == lexicon_.end() || tag >= real_tags_) return 0;
  return it->second[tag];
}

double TagModel::transition_prob(std::size_t t1, std::size_t t2, std::size_t t3) const {
  return trans_.at((t1 * width() + t2) * width() + t3);
}

std::vector<double> TagModel::suffix_distribution(std::string_view word) const {
  std::vector<double> p(real_tags_, 0.0);
  auto level = [&](const std::vector<std::uint64_t>& counts) {
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    std::vector<double> out(real_tags_, 0.0);
    for (std::size_t t = 0; t < real_tags_; ++t)
      out[t] = safe_ratio(static_cast<double>(counts[t]), static_cast<double>(total));
    return out;
  };

  if (auto root = suffixes_.find(std::string()); root != suffixes_.end()) {
    p = level(root->second);
  } else {
    p = tag_prior_;
  }
  const std::size_t longest = std::min(options_.max_suffix_length, word.size());
  for (std::size_t len = 1; len <= longest; ++len) {
    auto it = suffixes_.find(std::string(word.substr(word.size() - len)));
    if (it == suffixes_.end()) break;
    const auto here = level(it->second);
    for (std::size_t t = 0; t < real_tags_; ++t) p[t] = (here[t] + theta_ * p[t]) / (1.0 + theta_);
  }
  return p;
}

double TagModel::emission_prob(std::string_view word, std::size_t tag) const {
  if (tag >= real_tags_) return 0.0;
  return emission_probs(word)[tag];
}

std::vector<double> TagModel::emission_probs(std::string_view word) const {
  std::vector<double> out(real_tags_, 0.0);
  if (auto it = lexicon_.find(std::string(word)); it != lexicon_.end()) {
    for (std::size_t t = 0; t < real_tags_; ++t)
      out[t] = safe_ratio(static_cast<double>(it->second[t]), static_cast<double>(uni_[t]));
    return out;
  }
  const auto dist = suffix_distribution(word);
  for (std::size_t t = 0; t < real_tags_; ++t) out[t] = safe_ratio(dist[t], tag_prior_[t]);
  return out;
}

void TagModel::finalize() {
  const std::size_t w = width();
  hist1_.assign(w, 0);
  hist2_.assign(w * w, 0);
  for (std::size_t a = 0; a < w; ++a)
    for (std::size_t b = 0; b < w; ++b) {
      hist1_[a] += bi_[a * w + b];
      for (std::size_t c = 0; c < w; ++c) hist2_[a * w + b] += tri_[(a * w + b) * w + c];
    }

  std::uint64_t word_tokens = 0;
  for (std::size_t t = 0; t < real_tags_; ++t) word_tokens += uni_[t];
  tag_prior_.assign(real_tags_, 0.0);
  for (std::size_t t = 0; t < real_tags_; ++t)
    tag_prior_[t] = safe_ratio(static_cast<double>(uni_[t]), static_cast<double>(word_tokens));

  // Unseen histories back off to the next lower order so every row of the
  // table is a proper distribution.
  trans_.assign(w * w * w, 0.0);
  for (std::size_t a = 0; a < w; ++a)
    for (std::size_t b = 0; b < w; ++b)
      for (std::size_t c = 0; c < w; ++c) {
        const double p1 = safe_ratio(static_cast<double>(uni_[c]), static_cast<double>(positions_));
        const double p2 = hist1_[b] > 0 ? static_cast<double>(bi_[b * w + c]) / static_cast<double>(hist1_[b]) : p1;
        const double p3 = hist2_[a * w + b] > 0
                              ? static_cast<double>(tri_[(a * w + b) * w + c]) /
                                    static_cast<double>(hist2_[a * w + b])
                              : p2;
        trans_[(a * w + b) * w + c] = lambda_[0] * p1 + lambda_[1] * p2 + lambda_[2] * p3;
      }
}

TagModel train_tagger(std::span<const TaggedSentence> sentences,
                      const TaggerTrainingOptions& options) {
  std::set<std::string> tagnames;
  std::size_t nonempty = 0;
  for (const auto& s : sentences) {
    if (!s.empty()) ++nonempty;
    for (const auto& tok : s) {
      if (tok.tag == TagModel::kBoundaryTag)
        throw Error("tag name '" + tok.tag + "' is reserved for the sentence boundary");
      if (tok.tag.empty() || tok.token.empty()) throw Error("tagged token with empty field");
      tagnames.insert(tok.tag);
    }
  }
  if (nonempty == 0) throw Error("train_tagger: no nonempty sentence in training corpus");

  TagModel m;
  m.options_ = options;
  m.real_tags_ = tagnames.size();
  m.tags_.assign(tagnames.begin(), tagnames.end());
  m.tags_.emplace_back(TagModel::kBoundaryTag);
  const std::size_t w = m.width();
  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t i = 0; i < m.real_tags_; ++i) index.emplace(m.tags_[i], i);

  m.uni_.assign(w, 0);
  m.bi_.assign(w * w, 0);
  m.tri_.assign(w * w * w, 0);
  const std::size_t bnd = m.boundary();

  for (const auto& s : sentences) {
    if (s.empty()) continue;
    std::vector<std::size_t> seq{bnd, bnd};
    for (const auto& tok : s) {
      const auto t = index.find(tok.tag)->second;
      seq.push_back(t);
      auto& row = m.lexicon_[tok.token];
      if (row.empty()) row.assign(m.real_tags_, 0);
      ++row[t];
    }
    seq.push_back(bnd);
    for (std::size_t i = 2; i < seq.size(); ++i) {
      ++m.uni_[seq[i]];
      ++m.bi_[seq[i - 1] * w + seq[i]];
      ++m.tri_[(seq[i - 2] * w + seq[i - 1]) * w + seq[i]];
      ++m.positions_;
    }
  }

  // Suffix statistics from rare words; the empty suffix is the root.
  for (const auto& [word, row] : m.lexicon_) {
    std::uint64_t freq = 0;
    for (auto c : row) freq += c;
    if (freq > options.rare_threshold) continue;
    const std::size_t longest = std::min(options.max_suffix_length, word.size());
    for (std::size_t len = 0; len <= longest; ++len) {
      auto& counts = m.suffixes_[word.substr(word.size() - len)];
      if (counts.empty()) counts.assign(m.real_tags_, 0);
      for (std::size_t t = 0; t < m.real_tags_; ++t) counts[t] += row[t];
    }
  }

  // Deleted interpolation: each trigram's count is credited to the order
  // whose estimate, with that trigram removed once, is largest. Ties go to
  // the higher order.
  std::vector<std::uint64_t> hist1(w, 0), hist2(w * w, 0);
  for (std::size_t a = 0; a < w; ++a)
    for (std::size_t b = 0; b < w; ++b) {
      hist1[a] += m.bi_[a * w + b];
      for (std::size_t c = 0; c < w; ++c) hist2[a * w + b] += m.tri_[(a * w + b) * w + c];
    }
  double credit[3] = {0, 0, 0};
  for (std::size_t a = 0; a < w; ++a)
    for (std::size_t b = 0; b < w; ++b)
      for (std::size_t c = 0; c < w; ++c) {
        const auto f = m.tri_[(a * w + b) * w + c];
        if (f == 0) continue;
        const double c3 = safe_ratio(static_cast<double>(f) - 1.0,
                                     static_cast<double>(hist2[a * w + b]) - 1.0);
        const double c2 = safe_ratio(static_cast<double>(m.bi_[b * w + c]) - 1.0,
                                     static_cast<double>(hist1[b]) - 1.0);
        const double c1 = safe_ratio(static_cast<double>(m.uni_[c]) - 1.0,
                                     static_cast<double>(m.positions_) - 1.0);
        if (c3 >= c2 && c3 >= c1) credit[2] += static_cast<double>(f);
        else if (c2 >= c1) credit[1] += static_cast<double>(f);
        else credit[0] += static_cast<double>(f);
      }
  const double total = credit[0] + credit[1] + credit[2];
  for (int i = 0; i < 3; ++i) m.lambda_[i] = credit[i] / total;

  // Successive-abstraction weight: spread of the unconditioned tag
  // probabilities.
  std::uint64_t word_tokens = 0;
  for (std::size_t t = 0; t < m.real_tags_; ++t) word_tokens += m.uni_[t];
  if (m.real_tags_ > 1) {
    double mean = 0;
    std::vector<double> p(m.real_tags_);
    for (std::size_t t = 0; t < m.real_tags_; ++t) {
      p[t] = static_cast<double>(m.uni_[t]) / static_cast<double>(word_tokens);
      mean += p[t];
    }
    mean /= static_cast<double>(m.real_tags_);
    double ss = 0;
    for (double v : p) ss += (v - mean) * (v - mean);
    m.theta_ = ss / static_cast<double>(m.real_tags_ - 1);
  }

  m.finalize();
  return m;
}

std::vector<TaggedToken> tag(const TagModel& model, std::span<const std::string> tokens,
                             const ViterbiOptions& options) {
  if (tokens.empty()) throw Error("tag: empty token list");
  const std::size_t n = tokens.size();
  const std::size_t real = model.num_tags();
  const std::size_t w = real + 1;
  const std::size_t bnd = model.boundary();
  const bool exact = options.beam_factor <= 0.0;
  const double beam = exact ? 0.0 : std::log(options.beam_factor);

  struct State {
    std::size_t prev;
    std::size_t cur;
    double score;
    std::size_t back;  // index into the previous column
  };
  std::vector<std::vector<State>> columns;
  columns.reserve(n + 1);
  columns.push_back({State{bnd, bnd, 0.0, 0}});

  std::vector<double> best(w * w);
  std::vector<std::size_t> best_back(w * w);
  std::vector<std::size_t> best_from(w * w);
  std::vector<char> seen(w * w);

  for (std::size_t i = 0; i < n; ++i) {
    const auto emit = model.emission_probs(tokens[i]);
    std::vector<std::size_t> candidates;
    for (std::size_t t = 0; t < real; ++t) {
      if (exact || emit[t] > 0.0) candidates.push_back(t);
    }
    std::vector<double> log_emit(real);
    for (std::size_t t = 0; t < real; ++t) log_emit[t] = std::log(emit[t]);

    std::fill(seen.begin(), seen.end(), 0);
    const auto& prev_col = columns.back();
    for (std::size_t si = 0; si < prev_col.size(); ++si) {
      const auto& st = prev_col[si];
      for (auto c : candidates) {
        const double step = std::log(model.transition_prob(st.prev, st.cur, c)) + log_emit[c];
        const double score = st.score + step;
        const std::size_t key = st.cur * w + c;
        if (!seen[key] || score > best[key] || (score == best[key] && st.prev < best_from[key])) {
          seen[key] = 1;
          best[key] = score;
          best_back[key] = si;
          best_from[key] = st.prev;
        }
      }
    }

    std::vector<State> col;
    double top = kNegInf;
    for (std::size_t key = 0; key < w * w; ++key)
      if (seen[key]) top = std::max(top, best[key]);
    for (std::size_t key = 0; key < w * w; ++key) {
      if (!seen[key]) continue;
      if (!exact && top != kNegInf && best[key] < top - beam) continue;
      col.push_back(State{key / w, key % w, best[key], best_back[key]});
    }
    columns.push_back(std::move(col));
  }

  // Close with the end boundary; ties favour the smallest last tag, then
  // the smallest tag before it.
  const auto& last = columns.back();
  std::size_t pick = 0;
  double pick_score = kNegInf;
  bool have = false;
  for (std::size_t si = 0; si < last.size(); ++si) {
    const auto& st = last[si];
    const double score = st.score + std::log(model.transition_prob(st.prev, st.cur, bnd));
    if (!have) {
      have = true;
      pick = si;
      pick_score = score;
      continue;
    }
    const auto& cur_best = last[pick];
    if (score > pick_score ||
        (score == pick_score &&
         (st.cur < cur_best.cur || (st.cur == cur_best.cur && st.prev < cur_best.prev)))) {
      pick = si;
      pick_score = score;
    }
  }
  // Every surviving path has probability zero: the answer is decided by the
  // tie rule alone, which pruning would distort.
  if (!exact && pick_score == kNegInf) return tag(model, tokens, ViterbiOptions::exact());

  std::vector<TaggedToken> out(n);
  std::size_t si = pick;
  for (std::size_t i = n; i >= 1; --i) {
    const auto& st = columns[i][si];
    out[i - 1] = TaggedToken{tokens[i - 1], model.tag_name(st.cur)};
    si = st.back;
  }
  return out;
}

// Serialization -----------------------------------------------------------

namespace {
constexpr std::string_view kMagic = "stance-tagmodel";
constexpr int kVersion = 1;

void write_counts(std::ostream& out, const std::vector<std::uint64_t>& v) {
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << v[i];
  out << '\n';
}

std::vector<std::uint64_t> read_counts(std::istream& in, std::size_t n) {
  std::vector<std::uint64_t> v(n);
  for (auto& x : v)
    if (!(in >> x)) throw Error("tag model: truncated count table");
  return v;
}

std::string expect_word(std::istream& in, std::string_view what) {
  std::string w;
  if (!(in >> w) || w != what) throw Error("tag model: expected '" + std::string(what) + "'");
  return w;
}
}  // namespace

void TagModel::save(std::ostream& out) const {
  out << kMagic << ' ' << kVersion << '\n';
  out << "rare_threshold " << options_.rare_threshold << '\n';
  out << "max_suffix_length " << options_.max_suffix_length << '\n';
  out << std::setprecision(17);
  out << "lambdas " << lambda_[0] << ' ' << lambda_[1] << ' ' << lambda_[2] << '\n';
  out << "theta " << theta_ << '\n';
  out << "positions " << positions_ << '\n';
  out << "tags " << real_tags_ << '\n';
  for (std::size_t t = 0; t < real_tags_; ++t) out << tags_[t] << '\n';
  out << "unigram\n";
  write_counts(out, uni_);
  out << "bigram\n";
  write_counts(out, bi_);
  out << "trigram\n";
  write_counts(out, tri_);

  auto sorted_keys = [](const auto& map) {
    std::vector<std::string> keys;
    keys.reserve(map.size());
    for (const auto& [k, _] : map) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    return keys;
  };
  out << "lexicon " << lexicon_.size() << '\n';
  for (const auto& word : sorted_keys(lexicon_)) {
    out << word;
    for (auto c : lexicon_.at(word)) out << '\t' << c;
    out << '\n';
  }
  out << "suffixes " << suffixes_.size() << '\n';
  for (const auto& suf : sorted_keys(suffixes_)) {
    out << '|' << suf;
    for (auto c : suffixes_.at(suf)) out << '\t' << c;
    out << '\n';
  }
}

TagModel TagModel::load(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kMagic) throw Error("tag model: bad header");
  if (version != kVersion) throw Error("tag model: unsupported version " + std::to_string(version));
  TagModel m;
  expect_word(in, "rare_threshold");
  in >> m.options_.rare_threshold;
  expect_word(in, "max_suffix_length");
  in >> m.options_.max_suffix_length;
  expect_word(in, "lambdas");
  in >> m.lambda_[0] >> m.lambda_[1] >> m.lambda_[2];
  expect_word(in, "theta");
  in >> m.theta_;
  expect_word(in, "positions");
  in >> m.positions_;
  expect_word(in, "tags");
  in >> m.real_tags_;
  if (!in) throw Error("tag model: bad preamble");
  for (std::size_t t = 0; t < m.real_tags_; ++t) {
    std::string name;
    if (!(in >> name)) throw Error("tag model: truncated tag list");
    m.tags_.push_back(name);
  }
  m.tags_.emplace_back(kBoundaryTag);
  const std::size_t w = m.width();
  expect_word(in, "unigram");
  m.uni_ = read_counts(in, w);
  expect_word(in, "bigram");
  m.bi_ = read_counts(in, w * w);
  expect_word(in, "trigram");
  m.tri_ = read_counts(in, w * w * w);

  auto read_rows = [&](std::string_view section, auto& map, bool prefixed) {
    std::size_t count = 0;
    expect_word(in, section);
    in >> count;
    std::string line;
    std::getline(in, line);
    for (std::size_t i = 0; i < count; ++i) {
      if (!std::getline(in, line)) throw Error("tag model: truncated " + std::string(section));
      auto fields = split_view(line, '\t');
      if (fields.size() != m.real_tags_ + 1)
        throw Error("tag model: bad row in " + std::string(section));
      std::string key(fields[0]);
      if (prefixed) {
        if (key.empty() || key[0] != '|') throw Error("tag model: bad suffix row");
        key.erase(0, 1);
      }
      std::vector<std::uint64_t> row(m.real_tags_);
      for (std::size_t t = 0; t < m.real_tags_; ++t) row[t] = std::stoull(std::string(fields[t + 1]));
      map.emplace(std::move(key), std::move(row));
    }
  };
  read_rows("lexicon", m.lexicon_, false);
  read_rows("suffixes", m.suffixes_, true);
  m.finalize();
  return m;
}

void TagModel::save(const std::filesystem::path& path) const {
  std::ostringstream os;
  save(os);
  write_file(path, os.str());
}

TagModel TagModel::load(const std::filesystem::path& path) {
  std::istringstream is(read_file(path));
  return load(is);
}

// Tagged files ------------------------------------------------------------

std::vector<TaggedSentence> parse_tagged(std::string_view content, const std::string& source_name) {
  std::vector<TaggedSentence> out;
  TaggedSentence cur;
  std::size_t lineno = 0;
  for (auto line : split_lines(content)) {
    ++lineno;
    if (line.starts_with("%%")) continue;
    if (trim(line).empty()) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
      continue;
    }
    auto fields = split_view(line, '\t');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
      throw ParseError(source_name, lineno,
                       "expected token<TAB>tag, got " + std::to_string(fields.size()) + " field(s)");
    cur.push_back(TaggedToken{std::string(fields[0]), std::string(fields[1])});
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<TaggedSentence> load_tagged(const std::filesystem::path& path) {
  return parse_tagged(read_file(path), path.string());
}

std::string format_tagged(std::span<const TaggedSentence> sentences) {
  std::string out;
  for (const auto& s : sentences) {
    for (const auto& t : s) out += t.token + "\t" + t.tag + "\n";
    out += "\n";
  }
  return out;
}

}  // namespace stance
