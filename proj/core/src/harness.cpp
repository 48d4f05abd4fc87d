#include "stance/harness.hpp"

#include <algorithm>
#include <cstdio>
#include <future>
#include <map>
#include <memory>
#include <set>

#include "stance/error.hpp"
#include "stance/text_io.hpp"

namespace stance {

double accuracy(std::span<const StanceLabel> predictions, std::span<const StanceLabel> gold) {
  if (predictions.size() != gold.size())
    throw Error("accuracy: " + std::to_string(predictions.size()) + " predictions for " +
                std::to_string(gold.size()) + " gold labels");
  if (gold.empty()) throw Error("accuracy: empty label lists");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) hits += predictions[i] == gold[i];
  return static_cast<double>(hits) / static_cast<double>(gold.size());
}

std::string format_percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", fraction * 100.0);
  return buf;
}

std::string slugify(std::string_view target) {
  std::string out;
  bool gap = false;
  for (unsigned char c : target) {
    if (std::isalnum(c)) {
      if (gap && !out.empty()) out.push_back('_');
      out.push_back(static_cast<char>(std::tolower(c)));
      gap = false;
    } else {
      gap = true;
    }
  }
  return out.empty() ? std::string("target") : out;
}

std::vector<TaggedSentence> tag_corpus(const Corpus& corpus, const TagModel& model,
                                       const TokenizerOptions& tokenizer,
                                       const ViterbiOptions& viterbi, std::size_t threads) {
  const auto& tweets = corpus.tweets();
  std::vector<TaggedSentence> out(tweets.size());
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t i = begin; i < tweets.size(); i += step) {
      const auto tokens = tokenize(tweets[i].text, tokenizer);
      if (!tokens.empty()) out[i] = tag(model, tokens, viterbi);
    }
  };
  const std::size_t workers = std::max<std::size_t>(1, std::min(threads, tweets.size()));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w) jobs.push_back(std::async(std::launch::async, work, w, workers));
    for (auto& j : jobs) j.get();
  }
  return out;
}

namespace {

// Per-tweet inputs for one corpus split, aligned with corpus order.
struct SplitData {
  Corpus corpus;
  std::vector<TaggedSentence> tagged;
  std::vector<std::vector<DepTriple>> triples;
};

struct Resources {
  SplitData train;
  SplitData test;
  std::unique_ptr<SplitData> missing_train;  // EXPLICIT_FILE policy
  std::unique_ptr<MpqaLexicon> mpqa;
  std::unique_ptr<ArguingLexicon> arguing;
};

bool needs_tokens(const ExperimentConfig& c) {
  return std::any_of(c.schemes.begin(), c.schemes.end(), [](auto s) { return !uses_triples(s); });
}

bool needs_triples(const ExperimentConfig& c) {
  return std::any_of(c.schemes.begin(), c.schemes.end(), [](auto s) { return uses_triples(s); });
}

std::vector<std::vector<DepTriple>> load_triples(const std::filesystem::path& conll,
                                                 const std::filesystem::path& index,
                                                 const ConllColumns& columns, std::size_t tweets) {
  const auto sentences = load_conll(conll, columns);
  const auto counts = load_alignment(index);
  if (counts.size() != tweets)
    throw Error("alignment file " + index.string() + " has " + std::to_string(counts.size()) +
                " entries for " + std::to_string(tweets) + " tweets");
  return triples_per_tweet(sentences, counts);
}

std::vector<TaggedSentence> load_pretagged(const std::filesystem::path& path, std::size_t tweets) {
  auto sentences = load_tagged(path);
  if (sentences.size() != tweets)
    throw Error("pre-tagged file " + path.string() + " has " + std::to_string(sentences.size()) +
                " sentences for " + std::to_string(tweets) + " tweets");
  return sentences;
}

Resources prepare(const ExperimentConfig& config) {
  Resources r;
  r.train.corpus = load_corpus(config.train_path, config.train_columns);
  r.test.corpus = load_corpus(config.test_path, config.test_columns);
  if (config.missing_target_policy == MissingTargetPolicy::ExplicitFile) {
    r.missing_train = std::make_unique<SplitData>();
    r.missing_train->corpus = load_corpus(*config.missing_target_train, config.train_columns);
  }

  if (needs_tokens(config)) {
    if (config.train_tagged) {
      r.train.tagged = load_pretagged(*config.train_tagged, r.train.corpus.size());
      r.test.tagged = load_pretagged(*config.test_tagged, r.test.corpus.size());
    }
    if (!config.train_tagged || r.missing_train) {
      std::optional<TagModel> model;
      if (config.tagger_model) {
        model = TagModel::load(*config.tagger_model);
      } else if (config.tagger_corpus) {
        const auto sentences = load_tagged(*config.tagger_corpus);
        model = train_tagger(sentences, config.tagger_training);
      } else {
        throw Error("EXPLICIT_FILE training data needs a tagger (set [tagger] corpus or model)");
      }
      if (!config.train_tagged) {
        r.train.tagged = tag_corpus(r.train.corpus, *model, config.tokenizer, config.viterbi, config.threads);
        r.test.tagged = tag_corpus(r.test.corpus, *model, config.tokenizer, config.viterbi, config.threads);
      }
      if (r.missing_train)
        r.missing_train->tagged =
            tag_corpus(r.missing_train->corpus, *model, config.tokenizer, config.viterbi, config.threads);
    }
  }
  if (needs_triples(config)) {
    r.train.triples = load_triples(*config.conll_train, *config.conll_train_index, config.conll_columns,
                                   r.train.corpus.size());
    r.test.triples = load_triples(*config.conll_test, *config.conll_test_index, config.conll_columns,
                                  r.test.corpus.size());
    if (r.missing_train)
      throw Error("DEP_TRIPLES cannot be combined with the EXPLICIT_FILE training policy");
  }
  for (auto s : config.schemes) {
    if (s == FeatureScheme::MpqaWeighted && !r.mpqa)
      r.mpqa = std::make_unique<MpqaLexicon>(parse_mpqa(*config.mpqa_path));
    if (s == FeatureScheme::ArguingBinary && !r.arguing) {
      r.arguing = std::make_unique<ArguingLexicon>(parse_arguing(config.arguing_patterns, config.arguing_macros));
      r.arguing->mode = config.arguing_mode;
    }
  }
  return r;
}

// One tweet drawn from a split.
struct Ref {
  const SplitData* split;
  std::size_t index;
  const Tweet& tweet() const { return split->corpus.tweets()[index]; }
};

std::uint64_t mix_seed(std::uint64_t seed, std::string_view target, FeatureScheme scheme) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : target) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t z = seed ^ h ^ (static_cast<std::uint64_t>(scheme) + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct TargetJob {
  std::string target;
  std::vector<Ref> train;
  std::vector<Ref> test;
};

struct TargetOutcome {
  std::vector<ResultRow> rows;
  std::vector<KSweep> sweeps;
  std::vector<std::string> notes;
};

std::vector<FeatureVector> vectorize_all(const Vectorizer& vec, FeatureScheme scheme,
                                         const std::vector<Ref>& refs) {
  std::vector<FeatureVector> out;
  out.reserve(refs.size());
  for (const auto& r : refs) {
    const auto& tw = r.tweet();
    if (uses_triples(scheme)) out.push_back(vec(r.split->triples[r.index], tw.stance));
    else out.push_back(vec(r.split->tagged[r.index], tw.stance, tw.sentiment_or_other()));
  }
  return out;
}

TargetOutcome run_target(const ExperimentConfig& config, const Resources& res, const TargetJob& job) {
  TargetOutcome outcome;
  std::vector<StanceLabel> gold;
  LabelCounts test_counts{};
  for (const auto& r : job.test) {
    gold.push_back(r.tweet().stance);
    ++test_counts[index_of(r.tweet().stance)];
  }
  const auto majority = argmax_label(test_counts);
  const double baseline =
      static_cast<double>(test_counts[index_of(majority)]) / static_cast<double>(job.test.size());

  const bool want_sweep =
      !config.k_sweep.empty() &&
      (config.sweep_targets.empty() ||
       std::find(config.sweep_targets.begin(), config.sweep_targets.end(), job.target) !=
           config.sweep_targets.end());
  const auto sweep_scheme = config.sweep_scheme.value_or(config.schemes.front());

  for (auto scheme : config.schemes) {
    std::string stage = "building features";
    try {
      Vocabulary vocab;
      if (uses_triples(scheme)) {
        std::vector<std::vector<DepTriple>> inputs;
        for (const auto& r : job.train) inputs.push_back(r.split->triples[r.index]);
        vocab = build_vocab(inputs, scheme);
      } else {
        std::vector<TaggedSentence> inputs;
        for (const auto& r : job.train) inputs.push_back(r.split->tagged[r.index]);
        vocab = build_vocab(inputs, scheme);
      }
      const Vectorizer vec(std::move(vocab), res.mpqa.get(), res.arguing.get(), config.vectorize);
      const auto train_vectors = vectorize_all(vec, scheme, job.train);
      const auto test_vectors = vectorize_all(vec, scheme, job.test);
      if (scheme == FeatureScheme::Bow3PosSentiment) {
        const auto missing = std::count_if(job.test.begin(), job.test.end(),
                                           [](const Ref& r) { return !r.tweet().sentiment; });
        if (missing > 0)
          outcome.notes.push_back("target '" + job.target + "': " + std::to_string(missing) +
                                  " test tweets without sentiment treated as OTHER");
      }

      for (auto learner : config.learners) {
        stage = "learner " + std::string(to_string(learner));
        std::vector<StanceLabel> predictions;
        predictions.reserve(test_vectors.size());
        if (learner == Learner::Knn) {
          const auto model = KnnModel::train(train_vectors, config.knn_for(job.target));
          for (const auto& v : test_vectors) predictions.push_back(model.predict(v.values));
        } else {
          auto fc = config.forest_for(job.target);
          fc.seed = mix_seed(config.seed, job.target, scheme);
          const auto model = fit_forest(train_vectors, fc);
          for (const auto& v : test_vectors) predictions.push_back(predict_forest(model, v.values));
        }
        outcome.rows.push_back(ResultRow{job.target, scheme, learner, accuracy(predictions, gold),
                                         baseline, job.test.size()});
      }

      if (want_sweep && scheme == sweep_scheme) {
        stage = "k sweep";
        const auto knn = config.knn_for(job.target);
        const auto base = InstanceBase::fit(train_vectors);
        const auto weights = weights_for(base, knn.weighting);
        outcome.sweeps.push_back(
            KSweep{job.target, scheme, sweep_k(base, weights, test_vectors, config.k_sweep, knn.neighbors)});
      }
    } catch (const std::exception& e) {
      throw Error("target '" + job.target + "', scheme " + std::string(to_string(scheme)) + ", " + stage +
                  ": " + e.what());
    }
  }
  return outcome;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto res = prepare(config);

  std::map<std::string, std::vector<Ref>> train_by_target, test_by_target;
  for (std::size_t i = 0; i < res.train.corpus.size(); ++i)
    train_by_target[res.train.corpus.tweets()[i].target].push_back(Ref{&res.train, i});
  for (std::size_t i = 0; i < res.test.corpus.size(); ++i)
    test_by_target[res.test.corpus.tweets()[i].target].push_back(Ref{&res.test, i});

  ExperimentResult result;
  std::vector<TargetJob> jobs;
  for (const auto& [target, test] : test_by_target) {
    if (!config.targets.empty() &&
        std::find(config.targets.begin(), config.targets.end(), target) == config.targets.end())
      continue;
    TargetJob job{target, {}, test};
    if (auto it = train_by_target.find(target); it != train_by_target.end()) {
      job.train = it->second;
    } else {
      switch (config.missing_target_policy) {
        case MissingTargetPolicy::Skip:
          result.notes.push_back("target '" + target + "': no training tweets, skipped (policy NONE)");
          continue;
        case MissingTargetPolicy::UnionOfAll:
          for (std::size_t i = 0; i < res.train.corpus.size(); ++i) job.train.push_back(Ref{&res.train, i});
          result.notes.push_back("target '" + target + "': trained on all " +
                                 std::to_string(job.train.size()) + " training tweets (policy UNION_OF_ALL)");
          break;
        case MissingTargetPolicy::ExplicitFile:
          for (std::size_t i = 0; i < res.missing_train->corpus.size(); ++i)
            job.train.push_back(Ref{res.missing_train.get(), i});
          result.notes.push_back("target '" + target + "': trained on " + std::to_string(job.train.size()) +
                                 " tweets from " + config.missing_target_train->string() +
                                 " (policy EXPLICIT_FILE)");
          break;
      }
      if (job.train.empty()) throw Error("target '" + target + "': no training tweets available");
    }
    jobs.push_back(std::move(job));
  }
  for (const auto& t : config.targets)
    if (!test_by_target.contains(t)) result.notes.push_back("target '" + t + "': no test tweets, skipped");

  std::vector<TargetOutcome> outcomes(jobs.size());
  const std::size_t workers = std::max<std::size_t>(1, std::min(config.threads, jobs.size()));
  if (workers == 1) {
    for (std::size_t j = 0; j < jobs.size(); ++j) outcomes[j] = run_target(config, res, jobs[j]);
  } else {
    std::vector<std::future<void>> futures;
    for (std::size_t w = 0; w < workers; ++w)
      futures.push_back(std::async(std::launch::async, [&, w] {
        for (std::size_t j = w; j < jobs.size(); j += workers) outcomes[j] = run_target(config, res, jobs[j]);
      }));
    for (auto& f : futures) f.get();
  }
  for (auto& o : outcomes) {
    for (auto& r : o.rows) result.table.rows.push_back(std::move(r));
    for (auto& s : o.sweeps) result.sweeps.push_back(std::move(s));
    for (auto& n : o.notes) result.notes.push_back(std::move(n));
  }
  return result;
}

std::string format_report(const ResultsTable& table, ReportFormat format) {
  std::string out;
  if (format == ReportFormat::Csv) {
    out = "target,scheme,learner,accuracy,majority_baseline,n_test\n";
    for (const auto& r : table.rows) {
      std::string target = r.target;
      if (target.find_first_of(",\"") != std::string::npos) {
        std::string q = "\"";
        for (char c : target) {
          if (c == '"') q.push_back('"');
          q.push_back(c);
        }
        target = q + "\"";
      }
      out += target + "," + std::string(to_string(r.scheme)) + "," + std::string(to_string(r.learner)) + "," +
             format_percent(r.accuracy) + "," + format_percent(r.majority_baseline) + "," +
             std::to_string(r.n_test) + "\n";
    }
    return out;
  }

  // Pivot: one line per target, one column per (scheme, learner).
  std::vector<std::pair<FeatureScheme, Learner>> columns;
  std::vector<std::string> targets;
  std::map<std::string, double> baseline;
  std::map<std::tuple<std::string, FeatureScheme, Learner>, double> cell;
  for (const auto& r : table.rows) {
    const auto key = std::make_pair(r.scheme, r.learner);
    if (std::find(columns.begin(), columns.end(), key) == columns.end()) columns.push_back(key);
    if (std::find(targets.begin(), targets.end(), r.target) == targets.end()) targets.push_back(r.target);
    baseline[r.target] = r.majority_baseline;
    cell[{r.target, r.scheme, r.learner}] = r.accuracy;
  }
  out = "| Target | Majority Class |";
  for (const auto& [s, l] : columns) out += " " + std::string(to_string(s)) + " (" + std::string(to_string(l)) + ") |";
  out += "\n|---|---|";
  for (std::size_t i = 0; i < columns.size(); ++i) out += "---|";
  out += "\n";
  for (const auto& t : targets) {
    out += "| " + t + " | " + format_percent(baseline[t]) + " |";
    for (const auto& [s, l] : columns) {
      auto it = cell.find({t, s, l});
      out += " " + (it == cell.end() ? std::string("-") : format_percent(it->second)) + " |";
    }
    out += "\n";
  }
  return out;
}

void emit_report(const ResultsTable& table, ReportFormat format, const std::filesystem::path& path) {
  write_file(path, format_report(table, format));
}

std::string format_k_sweep(std::span<const std::pair<std::size_t, double>> points) {
  std::string out = "k,accuracy\n";
  char buf[64];
  for (const auto& [k, acc] : points) {
    std::snprintf(buf, sizeof buf, "%zu,%.6f\n", k, acc);
    out += buf;
  }
  return out;
}

void emit_k_sweep(std::span<const std::pair<std::size_t, double>> points, const std::filesystem::path& path) {
  if (points.empty()) throw Error("emit_k_sweep: no points");
  write_file(path, format_k_sweep(points));
}

std::filesystem::path write_experiment_outputs(const ExperimentResult& result, const ExperimentConfig& config) {
  const auto report = config.output_dir / (config.format == ReportFormat::Csv ? "results.csv" : "results.md");
  emit_report(result.table, config.format, report);
  for (const auto& s : result.sweeps)
    emit_k_sweep(s.points, config.output_dir / ("k_sweep_" + slugify(s.target) + "_" +
                                                to_lower(to_string(s.scheme)) + ".csv"));
  std::string notes;
  for (const auto& n : result.notes) notes += n + "\n";
  write_file(config.output_dir / "notes.txt", notes);
  return report;
}

}  // namespace stance
