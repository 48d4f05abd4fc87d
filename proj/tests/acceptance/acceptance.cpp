// Acceptance checks. Prints one PASS/FAIL/SKIP line per criterion and exits
// non-zero if any gating criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "stance/features.hpp"
#include "stance/forest.hpp"
#include "stance/harness.hpp"
#include "stance/lexicons.hpp"
#include "stance/mbl.hpp"
#include "stance/tagger.hpp"
#include "stance/text_io.hpp"
#include "test_support.hpp"

using namespace stance;
using stance::testing::TempDir;

namespace {

enum class Status { Pass, Fail, Skip };

struct Outcome {
  Status status = Status::Pass;
  std::string detail;
};

Outcome pass(std::string d) { return {Status::Pass, std::move(d)}; }
Outcome fail(std::string d) { return {Status::Fail, std::move(d)}; }
Outcome skip(std::string d) { return {Status::Skip, std::move(d)}; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::vector<FeatureVector> random_rows(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  std::vector<FeatureVector> out(n);
  for (auto& v : out) {
    v.values.resize(d);
    for (auto& x : v.values) x = static_cast<std::int8_t>(static_cast<int>(rng() % 3) - 1);
    v.label = kAllStances[rng() % 3];
  }
  return out;
}

Outcome knn_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2016);
  std::size_t queries = 0, mismatches = 0;
  const std::size_t bases = 300;
  for (std::size_t b = 0; b < bases; ++b) {
    const std::size_t d = 1 + rng() % 20;
    auto rows = random_rows(rng, 1 + rng() % 50, d);
    const auto base = InstanceBase::fit(rows);
    for (auto weighting : {Weighting::GainRatio, Weighting::None}) {
      const auto w = weights_for(base, weighting);
      std::vector<std::vector<std::int8_t>> qs;
      for (int i = 0; i < 4; ++i) qs.push_back(random_rows(rng, 1, d)[0].values);
      qs.push_back(rows[rng() % rows.size()].values);
      for (const auto& q : qs)
        for (std::size_t k : {1, 3, 5})
          for (auto sem : {NeighborSemantics::NearestDistances, NeighborSemantics::NearestInstances}) {
            ++queries;
            if (classify(base, KnnConfig{k, weighting, sem}, w, q) != oracle::knn(rows, w, q, k, sem)) ++mismatches;
          }
    }
  }
  const double secs = seconds_since(t0);
  const auto d = fmt("%zu bases, %zu queries, %zu mismatches, %.2fs", bases, queries, mismatches, secs);
  return mismatches == 0 && secs < 10.0 ? pass(d) : fail(d);
}

Outcome viterbi_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1031);
  const char* vocab[] = {"ab", "abc", "bca", "cab", "acab", "bb", "cc", "ca", "bab", "abca",
                         "zzq", "qab", "cabbing", "xy"};  // the last four never occur in training
  std::size_t models = 0, cases = 0, exact_mismatch = 0, default_mismatch = 0;
  while (models < 1000) {
    const std::size_t tags = 1 + rng() % 4;
    const auto corpus = oracle::random_tagged_corpus(rng, tags);
    const auto m = train_tagger(corpus);
    ++models;
    for (int s = 0; s < 6; ++s) {
      std::vector<std::string> toks(1 + rng() % 5);
      for (auto& t : toks) t = vocab[rng() % 14];
      const auto want = oracle::brute_force_tags(m, toks);
      const auto exact = tag(m, toks, ViterbiOptions::exact());
      const auto pruned = tag(m, toks);
      ++cases;
      bool same_exact = true, same_default = true;
      for (std::size_t i = 0; i < toks.size(); ++i) {
        same_exact &= exact[i].tag == m.tag_name(want[i]);
        same_default &= pruned[i].tag == m.tag_name(want[i]);
      }
      exact_mismatch += !same_exact;
      default_mismatch += !same_default;
    }
  }
  const double secs = seconds_since(t0);
  const auto d = fmt("%zu models, %zu sentences, mismatches: %zu exact search, %zu default beam, %.2fs", models,
                     cases, exact_mismatch, default_mismatch, secs);
  return exact_mismatch == 0 && default_mismatch == 0 && secs < 10.0 ? pass(d) : fail(d);
}

Outcome gain_ratio_fixtures() {
  const auto F = StanceLabel::Favor, A = StanceLabel::Against;
  // Four instances, class (+,+,-,-). Feature 0 is (a,a,b,b): IG 1 bit over
  // split info 1 bit. Feature 1 is constant. Feature 2 is (a,b,a,b): IG 0.
  const std::vector<FeatureVector> rows{{{1, 0, 1}, F}, {{1, 0, -1}, F}, {{-1, 0, 1}, A}, {{-1, 0, -1}, A}};
  const auto w = gain_ratio_weights(InstanceBase::fit(rows));
  const double expected[] = {1.0, 0.0, 0.0};
  double worst = 0;
  for (std::size_t f = 0; f < 3; ++f) worst = std::max(worst, std::abs(w[f] - expected[f]));
  const auto d = fmt("weights [%.12f, %.12f, %.12f], max error %.3g", w[0], w[1], w[2], worst);
  return worst <= 1e-9 ? pass(d) : fail(d);
}

Outcome cart_oracle() {
  const auto F = StanceLabel::Favor, A = StanceLabel::Against;
  ForestConfig single;
  single.n_trees = 1;
  single.bootstrap = false;
  single.max_features = MaxFeatures::All;

  const std::vector<FeatureVector> six{{{-1, -1}, A}, {{-1, 0}, A}, {{0, -1}, A},
                                       {{1, 1}, F},   {{1, 0}, F},   {{0, 1}, F}};
  const std::vector<TreeNode> hand{
      {0, -0.5, 1, 2, A}, {-1, 0, 0, 0, A}, {1, -0.5, 3, 4, F}, {-1, 0, 0, 0, A}, {-1, 0, 0, 0, F}};
  const auto six_model = fit_forest(six, single);
  const auto& tree = six_model.trees().at(0).nodes();
  const bool fixture_ok = tree == oracle::Cart(six).build() && tree == hand;

  std::mt19937_64 rng(6);
  std::size_t datasets = 0, imperfect = 0, oracle_mismatch = 0;
  for (; datasets < 500; ++datasets) {
    auto rows = random_rows(rng, 1 + rng() % 60, 1 + rng() % 8);
    std::map<std::vector<std::int8_t>, StanceLabel> first;
    for (auto& r : rows) r.label = first.emplace(r.values, r.label).first->second;
    const auto model = fit_forest(rows, single);
    oracle_mismatch += model.trees()[0].nodes() != oracle::Cart(rows).build();
    std::vector<StanceLabel> pred, gold;
    for (const auto& r : rows) {
      pred.push_back(predict_forest(model, r.values));
      gold.push_back(r.label);
    }
    imperfect += accuracy(pred, gold) != 1.0;
  }
  const auto d = fmt("6-point tree %s; %zu consistent datasets: %zu below accuracy 1.0, %zu differ from oracle",
                     fixture_ok ? "matches" : "DIFFERS", datasets, imperfect, oracle_mismatch);
  return fixture_ok && imperfect == 0 && oracle_mismatch == 0 ? pass(d) : fail(d);
}

Outcome lexicon_fixtures() {
  std::vector<std::string> failures;
  auto expect = [&](bool ok, const char* what) {
    if (!ok) failures.push_back(what);
  };
  auto tagged = [](std::initializer_list<const char*> words) {
    TaggedSentence s;
    for (const char* w : words) s.push_back({w, "NN"});
    return s;
  };
  using Values = std::vector<std::int8_t>;

  const auto sample =
      parse_mpqa_text("type=weaksubj len=1 word1=abandoned pos1=adj stemmed1=n priorpolarity=negative\n");
  const auto found = sample.lookup("abandoned");
  expect(found.size() == 1 && found[0] == MpqaEntry{"abandoned", "adj", false, Strength::Weak, Polarity::Negative},
         "mpqa sample line");

  const auto mpqa = parse_mpqa_text(
      "type=strongsubj len=1 word1=good pos1=adj stemmed1=n priorpolarity=positive\n"
      "type=strongsubj len=1 word1=bad pos1=adj stemmed1=n priorpolarity=negative\n");
  expect(lookup_polarity(mpqa, "good") == 1, "positive word");
  expect(lookup_polarity(mpqa, "bad") == -1, "negative word");
  expect(lookup_polarity(mpqa, "the") == 0, "absent word");
  const Vocabulary mpqa_vocab(FeatureScheme::MpqaWeighted, {"bad", "good", "the"});
  expect(vectorize(tagged({"good", "the"}), mpqa_vocab, StanceLabel::None, &mpqa).values == Values{0, 1, 0},
         "MPQA vector [0,1,0]");

  TempDir dir;
  write_file(dir / "be.tff", "@BE=(is|am|are)\n");
  write_file(dir / "necessity.tff", "must( not)?\nshould\n");
  write_file(dir / "certainty.tff", "@BE certain\n");
  const std::vector<std::filesystem::path> pats{dir / "necessity.tff", dir / "certainty.tff"}, macs{dir / "be.tff"};
  const auto arguing = parse_arguing(pats, macs);
  expect(arguing.patterns().size() == 3 && arguing.patterns()[2].source == "(is|am|are) certain",
         "macro expansion");
  expect(match_arguing(arguing, "must"), "must matches");
  expect(!match_arguing(arguing, ""), "empty word");
  expect(!match_arguing(arguing, "god"), "god does not match");
  expect(parse_arguing({}, {}).patterns().empty(), "empty lexicon");
  const Vocabulary arg_vocab(FeatureScheme::ArguingBinary, {"god", "must", "we"});
  expect(vectorize(tagged({"we", "must"}), arg_vocab, StanceLabel::None, nullptr, &arguing).values ==
             Values{0, 1, 0},
         "arguing vector [0,1,0]");

  const Vocabulary bow(FeatureScheme::BowAll, {"god", "love", "we"});
  expect(vectorize(tagged({"we", "god"}), bow, StanceLabel::None).values == Values{1, 0, 1}, "BOW vector [1,0,1]");
  const Vocabulary senti(FeatureScheme::Bow3PosSentiment, {"god"});
  const auto sv = vectorize(tagged({"god"}), senti, StanceLabel::None, nullptr, nullptr, SentimentLabel::Negative);
  expect(sv.values == Values{1, 0, 1, 0}, "sentiment one-hot");

  if (!failures.empty()) {
    std::string d = "failed:";
    for (const auto& f : failures) d += " [" + f + "]";
    return fail(d);
  }
  return pass("13 fixtures reproduce exactly");
}

Outcome metric_properties() {
  std::mt19937_64 rng(10);
  std::size_t violations = 0;
  const std::size_t triples = 10000;
  for (std::size_t i = 0; i < triples; ++i) {
    const std::size_t d = 1 + rng() % 20;
    const auto r = random_rows(rng, 3, d);
    const std::vector<double> unit(d, 1.0);
    const auto &a = r[0].values, &b = r[1].values, &c = r[2].values;
    const double ab = overlap_distance(a, b, unit), ba = overlap_distance(b, a, unit);
    const double bc = overlap_distance(b, c, unit), ac = overlap_distance(a, c, unit);
    violations += overlap_distance(a, a, unit) != 0.0;
    violations += (ab == 0.0) != (a == b);
    violations += ab < 0.0;
    violations += ab != ba;
    violations += ac > ab + bc;
  }

  std::size_t changed = 0;
  const std::size_t cases = 1000;
  for (std::size_t i = 0; i < cases; ++i) {
    const std::size_t d = 1 + rng() % 20;
    const auto rows = random_rows(rng, 1 + rng() % 50, d);
    const auto base = InstanceBase::fit(rows);
    const auto w = gain_ratio_weights(base);
    const double scale = i % 2 ? std::ldexp(1.0, static_cast<int>(rng() % 12) - 6)
                               : std::uniform_real_distribution<double>(0.01, 100.0)(rng);
    std::vector<double> scaled(w);
    for (auto& x : scaled) x *= scale;
    const auto q = random_rows(rng, 1, d)[0].values;
    const KnnConfig cfg{1 + rng() % 5, Weighting::GainRatio,
                        i % 3 ? NeighborSemantics::NearestDistances : NeighborSemantics::NearestInstances};
    changed += classify(base, cfg, w, q) != classify(base, cfg, scaled, q);
  }
  const auto d = fmt("%zu triples: %zu metric violations; %zu scaled cases: %zu changed", triples, violations,
                     cases, changed);
  return violations == 0 && changed == 0 ? pass(d) : fail(d);
}

struct RunBytes {
  std::string report;
  std::map<std::string, std::string> files;
};

RunBytes run_and_collect(ExperimentConfig config, std::size_t threads, std::size_t forest_threads,
                         const std::filesystem::path& out) {
  config.threads = threads;
  config.forest.threads = forest_threads;
  config.output_dir = out;
  const auto result = run_experiment(config);
  write_experiment_outputs(result, config);
  RunBytes r{format_report(result.table, config.format), {}};
  for (const auto& e : std::filesystem::directory_iterator(out))
    r.files[e.path().filename().string()] = read_file(e.path());
  return r;
}

Outcome determinism() {
  const auto config = load_experiment_config(stance::testing::synthetic_dir() / "experiment.ini");
  TempDir dir;
  const auto a = run_and_collect(config, 4, 1, dir / "a");
  const auto b = run_and_collect(config, 4, 1, dir / "b");
  const auto c = run_and_collect(config, 1, 1, dir / "c");
  const auto e = run_and_collect(config, 2, 3, dir / "e");
  const bool same = a.files == b.files && a.files == c.files && a.files == e.files && a.report == b.report;
  const auto d = fmt("%zu output files compared across 4 runs (threads 4, 4, 1, 2+forest 3): %s", a.files.size(),
                     same ? "byte-identical" : "DIFFER");
  return same && a.files.size() >= 3 ? pass(d) : fail(d);
}

Outcome synthetic_end_to_end() {
  const auto config = load_experiment_config(stance::testing::synthetic_dir() / "experiment.ini");
  const auto result = run_experiment(config);
  std::size_t low = 0;
  double worst = 1.0;
  std::map<std::pair<std::string, Learner>, std::map<FeatureScheme, double>> acc;
  for (const auto& r : result.table.rows) {
    worst = std::min(worst, r.accuracy);
    low += r.accuracy < 0.9;
    acc[{r.target, r.learner}][r.scheme] = r.accuracy;
  }
  std::size_t sentiment_worse = 0, compared = 0;
  for (const auto& [key, by_scheme] : acc) {
    ++compared;
    if (by_scheme.at(FeatureScheme::Bow3PosSentiment) < by_scheme.at(FeatureScheme::Bow3Pos)) ++sentiment_worse;
  }
  const std::size_t expected_rows = 2 * std::size(kAllSchemes) * 2;
  const auto d = fmt("%zu rows, minimum accuracy %.4f, %zu below 0.9; sentiment >= plain in %zu/%zu",
                     result.table.rows.size(), worst, low, compared - sentiment_worse, compared);
  return result.table.rows.size() == expected_rows && low == 0 && sentiment_worse == 0 ? pass(d) : fail(d);
}

const char* env(const char* name) {
  const char* v = std::getenv(name);
  return v && *v ? v : nullptr;
}

Outcome semeval_counts() {
  const char* train = env("STANCE_SEMEVAL_TRAIN");
  const char* test = env("STANCE_SEMEVAL_TEST");
  if (!train || !test) return skip("set STANCE_SEMEVAL_TRAIN and STANCE_SEMEVAL_TEST to run");
  const char* cols = env("STANCE_SEMEVAL_COLUMNS");
  const auto spec = cols ? ColumnSpec::parse(cols) : ColumnSpec::semeval();
  const auto tr = load_corpus(train, spec);
  const auto te = load_corpus(test, spec);
  const auto by_target = split_by_target(te);
  auto baseline = [&](const std::string& t) {
    auto it = by_target.find(t);
    return it == by_target.end() ? -1.0 : majority_class(it->second).second * 100.0;
  };
  const double ath = baseline("Atheism"), fem = baseline("Feminist Movement");
  const bool ok = tr.size() == 2913 && te.size() == 1956 && std::abs(ath - 72.39) <= 0.01 &&
                  std::abs(fem - 64.21) <= 0.01;
  const auto d = fmt("train %zu, test %zu, Atheism baseline %.4f%%, Feminist Movement baseline %.4f%%", tr.size(),
                     te.size(), ath, fem);
  return ok ? pass(d) : fail(d);
}

/// Informational: runs a user-supplied experiment on real data and prints
/// the report and sweeps. Never gates.
Outcome semeval_report() {
  const char* cfg = env("STANCE_SEMEVAL_CONFIG");
  if (!cfg) return skip("set STANCE_SEMEVAL_CONFIG to an experiment file to print the full matrix");
  auto config = load_experiment_config(cfg);
  config.format = ReportFormat::Markdown;
  const auto result = run_experiment(config);
  std::printf("%s", format_report(result.table, ReportFormat::Markdown).c_str());
  for (const auto& s : result.sweeps) {
    std::printf("k sweep %s %s\n%s", s.target.c_str(), std::string(to_string(s.scheme)).c_str(),
                format_k_sweep(s.points).c_str());
  }
  return pass(fmt("%zu rows reported (informational)", result.table.rows.size()));
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
    bool gating;
  };
  const std::vector<Criterion> criteria{
      {"knn_matches_brute_force_oracle", knn_oracle, true},
      {"viterbi_matches_exhaustive_search", viterbi_oracle, true},
      {"gain_ratio_fixtures", gain_ratio_fixtures, true},
      {"cart_matches_exhaustive_oracle", cart_oracle, true},
      {"lexicon_vector_fixtures", lexicon_fixtures, true},
      {"overlap_metric_and_weight_scaling", metric_properties, true},
      {"experiment_reports_are_deterministic", determinism, true},
      {"synthetic_end_to_end", synthetic_end_to_end, true},
      {"semeval_counts_and_baselines", semeval_counts, true},
      {"semeval_full_report", semeval_report, false},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = fail(std::string("exception: ") + e.what());
    }
    const char* tag = o.status == Status::Pass ? "PASS" : o.status == Status::Fail ? "FAIL" : "SKIP";
    std::printf("%s %s: %s\n", tag, c.name, o.detail.c_str());
    std::fflush(stdout);
    if (o.status == Status::Fail && c.gating) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
