// Command-line front end: one subcommand per pipeline stage, plus
// `experiment` for the whole matrix.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "stance/config.hpp"
#include "stance/error.hpp"
#include "stance/harness.hpp"
#include "stance/text_io.hpp"

namespace fs = std::filesystem;
using namespace stance;

namespace {

template <class T, class F>
T parse_or_throw(const std::string& s, F parse, const char* what) {
  if (auto v = parse(s)) return *v;
  throw Error(std::string("unknown ") + what + " '" + s + "'");
}

TagModel obtain_tagger(const std::optional<fs::path>& model, const std::optional<fs::path>& corpus,
                       const TaggerTrainingOptions& options) {
  if (model) return TagModel::load(*model);
  if (corpus) return train_tagger(load_tagged(*corpus), options);
  throw Error("need --model or --tagger-corpus");
}

// Model files start with a magic word naming the learner.
std::string model_kind(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  std::string magic;
  in >> magic;
  return magic;
}

struct SplitOpts {
  fs::path input;
  std::string columns = "tsv:id=0,target=1,text=2,stance=3";
  fs::path out_dir = ".";
};

struct TagOpts {
  std::optional<fs::path> model, tagger_corpus, save_model;
  fs::path input, out;
  std::string columns = "tsv:id=0,target=1,text=2,stance=3";
  bool keep_hashtags = false;
  double beam = 1000.0;
};

struct FeaturizeOpts {
  std::string scheme;
  fs::path corpus, out;
  std::string columns = "tsv:id=0,target=1,text=2,stance=3";
  std::optional<fs::path> tagged, conll, conll_index, vocab, mpqa;
  std::vector<fs::path> arguing_patterns, arguing_macros;
  std::string conll_preset = "conllx";
  std::string arguing_mode = "word";
  bool presence_fallback = false;
  std::optional<std::string> target;
};

struct TrainOpts {
  std::string learner = "knn";
  fs::path data, out;
  std::size_t k = 1;
  std::string weighting = "gain_ratio";
  std::string neighbors = "distances";
  std::size_t n_trees = 10;
  std::string max_features = "sqrt";
  bool no_bootstrap = false;
  std::size_t min_samples_split = 2;
  std::uint64_t seed = 0;
  std::size_t threads = 1;
};

struct PredictOpts {
  fs::path model, data;
  std::optional<fs::path> out;
};

struct EvalOpts {
  fs::path predictions, gold;
};

struct SweepOpts {
  fs::path train, test;
  std::vector<std::size_t> k_values{1, 3, 5, 7, 9, 11, 13, 15};
  std::string weighting = "gain_ratio";
  std::string neighbors = "distances";
  std::optional<fs::path> out;
};

struct ExperimentOpts {
  fs::path config;
  std::optional<std::uint64_t> seed;
  std::optional<fs::path> out;
  std::optional<std::string> format;
  std::optional<std::size_t> threads;
};

struct BaselineOpts {
  fs::path corpus;
  std::string columns = "tsv:id=0,target=1,text=2,stance=3";
  std::string format = "csv";
  std::optional<fs::path> out;
};

void emit(const std::optional<fs::path>& out, const std::string& text) {
  if (out) write_file(*out, text);
  else std::cout << text;
}

int run_split(const SplitOpts& o) {
  const auto columns = ColumnSpec::parse(o.columns);
  const auto corpus = load_corpus(o.input, columns);
  const auto ext = columns.delimiter == ',' ? ".csv" : ".tsv";
  for (const auto& [target, sub] : split_by_target(corpus)) {
    const auto path = o.out_dir / (slugify(target) + ext);
    save_corpus(sub, path, columns);
    std::cout << path.string() << "\t" << sub.size() << "\n";
  }
  return 0;
}

int run_tag(const TagOpts& o) {
  const auto model = obtain_tagger(o.model, o.tagger_corpus, {});
  if (o.save_model) model.save(*o.save_model);
  if (o.input.empty()) return 0;
  const auto corpus = load_corpus(o.input, ColumnSpec::parse(o.columns));
  TokenizerOptions tok;
  tok.strip_hashtags = !o.keep_hashtags;
  const auto tagged = tag_corpus(corpus, model, tok, ViterbiOptions{o.beam});
  emit(o.out.empty() ? std::nullopt : std::optional(o.out), format_tagged(tagged));
  return 0;
}

int run_featurize(const FeaturizeOpts& o) {
  const auto scheme = parse_or_throw<FeatureScheme>(o.scheme, parse_scheme, "scheme");
  auto corpus = load_corpus(o.corpus, ColumnSpec::parse(o.columns));
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < corpus.size(); ++i)
    if (!o.target || corpus.tweets()[i].target == *o.target) keep.push_back(i);
  if (keep.empty()) throw Error("no tweets selected from " + o.corpus.string());

  std::vector<TaggedSentence> tagged;
  std::vector<std::vector<DepTriple>> triples;
  if (uses_triples(scheme)) {
    if (!o.conll || !o.conll_index) throw Error(std::string(to_string(scheme)) + " needs --conll and --conll-index");
    triples = triples_per_tweet(load_conll(*o.conll, ConllColumns::preset(o.conll_preset)),
                                load_alignment(*o.conll_index));
    if (triples.size() != corpus.size()) throw Error("CoNLL alignment does not match the corpus size");
  } else {
    if (!o.tagged) throw Error(std::string(to_string(scheme)) + " needs --tagged");
    tagged = load_tagged(*o.tagged);
    if (tagged.size() != corpus.size())
      throw Error("tagged file has " + std::to_string(tagged.size()) + " sentences for " +
                  std::to_string(corpus.size()) + " tweets");
  }

  std::optional<MpqaLexicon> mpqa;
  std::optional<ArguingLexicon> arguing;
  if (scheme == FeatureScheme::MpqaWeighted) {
    if (!o.mpqa) throw Error("MPQA_WEIGHTED needs --mpqa");
    mpqa = parse_mpqa(*o.mpqa);
  }
  if (scheme == FeatureScheme::ArguingBinary) {
    if (o.arguing_patterns.empty()) throw Error("ARGUING_BINARY needs --arguing-patterns");
    arguing = parse_arguing(o.arguing_patterns, o.arguing_macros);
    arguing->mode = o.arguing_mode == "search" ? ArguingMatchMode::Search : ArguingMatchMode::WholeWord;
  }

  Vocabulary vocab;
  if (o.vocab) {
    auto [v, rows] = read_feature_file(*o.vocab);
    if (v.scheme() != scheme) throw Error("vocabulary in " + o.vocab->string() + " is for another scheme");
    vocab = std::move(v);
  } else if (uses_triples(scheme)) {
    std::vector<std::vector<DepTriple>> sel;
    for (auto i : keep) sel.push_back(triples[i]);
    vocab = build_vocab(sel, scheme);
  } else {
    std::vector<TaggedSentence> sel;
    for (auto i : keep) sel.push_back(tagged[i]);
    vocab = build_vocab(sel, scheme);
  }

  const Vectorizer vec(vocab, mpqa ? &*mpqa : nullptr, arguing ? &*arguing : nullptr,
                       VectorizeOptions{o.presence_fallback});
  std::vector<FeatureVector> vectors;
  for (auto i : keep) {
    const auto& tw = corpus.tweets()[i];
    vectors.push_back(uses_triples(scheme) ? vec(triples[i], tw.stance)
                                           : vec(tagged[i], tw.stance, tw.sentiment_or_other()));
  }
  write_feature_file(vectors, vocab, o.out);
  std::cout << o.out.string() << "\t" << vectors.size() << " vectors, " << vocab.vector_length()
            << " features\n";
  return 0;
}

int run_train(const TrainOpts& o) {
  const auto [vocab, vectors] = read_feature_file(o.data);
  const auto learner = parse_or_throw<Learner>(o.learner, parse_learner, "learner");
  std::ostringstream out;
  if (learner == Learner::Knn) {
    KnnConfig c;
    c.k = o.k;
    c.weighting = parse_or_throw<Weighting>(o.weighting, parse_weighting, "weighting");
    c.neighbors = parse_or_throw<NeighborSemantics>(o.neighbors, parse_neighbors, "neighbor semantics");
    KnnModel::train(vectors, c).save(out);
  } else {
    ForestConfig c;
    c.n_trees = o.n_trees;
    c.max_features = parse_or_throw<MaxFeatures>(o.max_features, parse_max_features, "max_features");
    c.bootstrap = !o.no_bootstrap;
    c.min_samples_split = o.min_samples_split;
    c.seed = o.seed;
    c.threads = o.threads;
    fit_forest(vectors, c).save(out);
  }
  write_file(o.out, out.str());
  return 0;
}

std::vector<StanceLabel> predict_all(const fs::path& model_path, const std::vector<FeatureVector>& vectors) {
  const auto kind = model_kind(model_path);
  std::ifstream in(model_path);
  std::vector<StanceLabel> out;
  if (kind == "stance-knn") {
    const auto model = KnnModel::load(in);
    for (const auto& v : vectors) out.push_back(model.predict(v.values));
  } else if (kind == "stance-forest") {
    const auto model = RandomForestModel::load(in);
    for (const auto& v : vectors) out.push_back(predict_forest(model, v.values));
  } else {
    throw Error(model_path.string() + ": not a stance model file");
  }
  return out;
}

int run_predict(const PredictOpts& o) {
  const auto [vocab, vectors] = read_feature_file(o.data);
  std::string text;
  for (auto l : predict_all(o.model, vectors)) text += std::string(to_string(l)) + "\n";
  emit(o.out, text);
  return 0;
}

std::vector<StanceLabel> read_labels(const fs::path& path) {
  // A feature file (has a names sidecar) or one label per line.
  if (fs::exists(names_path(path))) {
    std::vector<StanceLabel> out;
    for (const auto& v : read_feature_file(path).second) out.push_back(v.label);
    return out;
  }
  const auto content = read_file(path);
  std::vector<StanceLabel> out;
  std::size_t n = 0;
  for (auto line : split_lines(content)) {
    ++n;
    line = trim(line);
    if (line.empty()) continue;
    auto l = parse_stance(line);
    if (!l) throw ParseError(path.string(), n, "unknown stance '" + std::string(line) + "'");
    out.push_back(*l);
  }
  return out;
}

int run_eval(const EvalOpts& o) {
  const auto pred = read_labels(o.predictions);
  const auto gold = read_labels(o.gold);
  std::printf("accuracy\t%s\t(%zu tweets)\n", format_percent(accuracy(pred, gold)).c_str(), gold.size());
  return 0;
}

int run_sweep(const SweepOpts& o) {
  const auto [vocab, train] = read_feature_file(o.train);
  const auto [tvocab, test] = read_feature_file(o.test);
  if (tvocab.vector_length() != vocab.vector_length())
    throw Error("train and test feature files have different vector lengths");
  const auto base = InstanceBase::fit(train);
  const auto weights =
      weights_for(base, parse_or_throw<Weighting>(o.weighting, parse_weighting, "weighting"));
  const auto points = sweep_k(base, weights, test, o.k_values,
                              parse_or_throw<NeighborSemantics>(o.neighbors, parse_neighbors, "neighbor semantics"));
  emit(o.out, format_k_sweep(points));
  return 0;
}

int run_experiment_cmd(const ExperimentOpts& o) {
  auto config = load_experiment_config(o.config);
  if (o.seed) config.seed = *o.seed;
  if (o.out) config.output_dir = *o.out;
  if (o.threads) config.threads = *o.threads;
  if (o.format) config.format = parse_or_throw<ReportFormat>(*o.format, parse_report_format, "format");
  const auto result = run_experiment(config);
  const auto report = write_experiment_outputs(result, config);
  std::cout << format_report(result.table, config.format);
  for (const auto& n : result.notes) std::cerr << "note: " << n << "\n";
  std::cerr << "report written to " << report.string() << "\n";
  return 0;
}

int run_baseline(const BaselineOpts& o) {
  const auto format = parse_or_throw<ReportFormat>(o.format, parse_report_format, "format");
  const auto corpus = load_corpus(o.corpus, ColumnSpec::parse(o.columns));
  std::string text = format == ReportFormat::Csv ? "target,majority_label,majority_baseline,n\n"
                                                 : "| Target | Majority Class | n |\n|---|---|---|\n";
  for (const auto& [target, sub] : split_by_target(corpus)) {
    const auto [label, frac] = majority_class(sub);
    if (format == ReportFormat::Csv)
      text += target + "," + std::string(to_string(label)) + "," + format_percent(frac) + "," +
              std::to_string(sub.size()) + "\n";
    else
      text += "| " + target + " | " + format_percent(frac) + " | " + std::to_string(sub.size()) + " |\n";
  }
  emit(o.out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Per-target stance detection experiments"};
  app.require_subcommand(1);

  SplitOpts split;
  auto* c_split = app.add_subcommand("split", "Write one corpus file per target");
  c_split->add_option("--input", split.input, "Corpus file")->required()->check(CLI::ExistingFile);
  c_split->add_option("--columns", split.columns, "Column spec, e.g. tsv:id=0,target=1,text=2,stance=3");
  c_split->add_option("--out", split.out_dir, "Output directory");

  TagOpts tagopt;
  auto* c_tag = app.add_subcommand("tag", "Train or load a tagger and tag a corpus");
  c_tag->add_option("--model", tagopt.model, "Saved tagger model")->check(CLI::ExistingFile);
  c_tag->add_option("--tagger-corpus", tagopt.tagger_corpus, "Two-column tagged training file")
      ->check(CLI::ExistingFile);
  c_tag->add_option("--save-model", tagopt.save_model, "Write the trained model here");
  c_tag->add_option("--input", tagopt.input, "Corpus to tag")->check(CLI::ExistingFile);
  c_tag->add_option("--columns", tagopt.columns, "Column spec of --input");
  c_tag->add_option("--out", tagopt.out, "Tagged output file (default stdout)");
  c_tag->add_flag("--keep-hashtags", tagopt.keep_hashtags, "Keep the '#' of hashtags");
  c_tag->add_option("--beam", tagopt.beam, "Beam factor; 0 searches exhaustively");

  FeaturizeOpts feat;
  auto* c_feat = app.add_subcommand("featurize", "Turn tagged tweets or CoNLL parses into a feature file");
  c_feat->add_option("--scheme", feat.scheme, "BOW_3POS, BOW_ALL, BOW_3POS_SENTIMENT, MPQA_WEIGHTED, "
                                              "ARGUING_BINARY or DEP_TRIPLES")->required();
  c_feat->add_option("--corpus", feat.corpus, "Corpus file (labels, sentiment)")->required()->check(CLI::ExistingFile);
  c_feat->add_option("--columns", feat.columns, "Column spec of --corpus");
  c_feat->add_option("--target", feat.target, "Only tweets of this target");
  c_feat->add_option("--tagged", feat.tagged, "Tagged file, one sentence per tweet")->check(CLI::ExistingFile);
  c_feat->add_option("--conll", feat.conll, "CoNLL parses")->check(CLI::ExistingFile);
  c_feat->add_option("--conll-index", feat.conll_index, "Sentences per tweet")->check(CLI::ExistingFile);
  c_feat->add_option("--conll-preset", feat.conll_preset, "conllx or corenlp");
  c_feat->add_option("--vocab", feat.vocab, "Reuse the vocabulary of this feature file (for test data)")
      ->check(CLI::ExistingFile);
  c_feat->add_option("--mpqa", feat.mpqa, "MPQA lexicon")->check(CLI::ExistingFile);
  c_feat->add_option("--arguing-patterns", feat.arguing_patterns, "Arguing pattern files")->check(CLI::ExistingFile);
  c_feat->add_option("--arguing-macros", feat.arguing_macros, "Arguing macro files")->check(CLI::ExistingFile);
  c_feat->add_option("--arguing-mode", feat.arguing_mode, "word or search")
      ->check(CLI::IsMember({"word", "search"}));
  c_feat->add_flag("--mpqa-presence-fallback", feat.presence_fallback, "Unmatched present words score 1");
  c_feat->add_option("--out", feat.out, "Feature file to write")->required();

  TrainOpts train;
  auto* c_train = app.add_subcommand("train", "Train a k-NN or random forest model");
  c_train->add_option("--learner", train.learner, "knn or forest");
  c_train->add_option("--data", train.data, "Training feature file")->required()->check(CLI::ExistingFile);
  c_train->add_option("--out", train.out, "Model file")->required();
  c_train->add_option("-k,--k", train.k, "Neighbours (k-NN)")->check(CLI::PositiveNumber);
  c_train->add_option("--weighting", train.weighting, "gain_ratio or none");
  c_train->add_option("--neighbors", train.neighbors, "distances or instances");
  c_train->add_option("--n-trees", train.n_trees, "Trees (forest)")->check(CLI::PositiveNumber);
  c_train->add_option("--max-features", train.max_features, "sqrt or all");
  c_train->add_flag("--no-bootstrap", train.no_bootstrap, "Grow every tree on the full set");
  c_train->add_option("--min-samples-split", train.min_samples_split, "Smallest splittable node");
  c_train->add_option("--seed", train.seed, "Forest seed");
  c_train->add_option("--threads", train.threads, "Tree-growing threads");

  PredictOpts pred;
  auto* c_pred = app.add_subcommand("predict", "Label a feature file with a trained model");
  c_pred->add_option("--model", pred.model, "Model file")->required()->check(CLI::ExistingFile);
  c_pred->add_option("--data", pred.data, "Feature file")->required()->check(CLI::ExistingFile);
  c_pred->add_option("--out", pred.out, "One label per line (default stdout)");

  EvalOpts ev;
  auto* c_eval = app.add_subcommand("eval", "Accuracy of predictions against gold labels");
  c_eval->add_option("--predictions", ev.predictions, "Label file")->required()->check(CLI::ExistingFile);
  c_eval->add_option("--gold", ev.gold, "Label file or feature file")->required()->check(CLI::ExistingFile);

  SweepOpts sweep;
  auto* c_sweep = app.add_subcommand("sweep-k", "k-NN accuracy for a list of k values");
  c_sweep->add_option("--train", sweep.train, "Training feature file")->required()->check(CLI::ExistingFile);
  c_sweep->add_option("--test", sweep.test, "Test feature file")->required()->check(CLI::ExistingFile);
  c_sweep->add_option("--k", sweep.k_values, "k values")->delimiter(',');
  c_sweep->add_option("--weighting", sweep.weighting, "gain_ratio or none");
  c_sweep->add_option("--neighbors", sweep.neighbors, "distances or instances");
  c_sweep->add_option("--out", sweep.out, "CSV output (default stdout)");

  ExperimentOpts exp;
  auto* c_exp = app.add_subcommand("experiment", "Run the configured target x scheme x learner matrix");
  c_exp->add_option("--config", exp.config, "Experiment file")->required()->check(CLI::ExistingFile);
  c_exp->add_option("--seed", exp.seed, "Override [experiment] seed");
  c_exp->add_option("--out", exp.out, "Override [experiment] output");
  c_exp->add_option("--format", exp.format, "csv or md")->check(CLI::IsMember({"csv", "md", "markdown"}));
  c_exp->add_option("--threads", exp.threads, "Override [experiment] threads");

  BaselineOpts base;
  auto* c_base = app.add_subcommand("baseline", "Majority-class baseline per target");
  c_base->add_option("--corpus", base.corpus, "Corpus file")->required()->check(CLI::ExistingFile);
  c_base->add_option("--columns", base.columns, "Column spec");
  c_base->add_option("--format", base.format, "csv or md")->check(CLI::IsMember({"csv", "md", "markdown"}));
  c_base->add_option("--out", base.out, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_split->parsed()) return run_split(split);
    if (c_tag->parsed()) return run_tag(tagopt);
    if (c_feat->parsed()) return run_featurize(feat);
    if (c_train->parsed()) return run_train(train);
    if (c_pred->parsed()) return run_predict(pred);
    if (c_eval->parsed()) return run_eval(ev);
    if (c_sweep->parsed()) return run_sweep(sweep);
    if (c_exp->parsed()) return run_experiment_cmd(exp);
    if (c_base->parsed()) return run_baseline(base);
  } catch (const std::exception& e) {
    std::cerr << "stance: error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
