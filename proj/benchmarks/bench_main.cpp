#include <benchmark/benchmark.h>

#include <random>

#include "stance/forest.hpp"
#include "stance/mbl.hpp"
#include "stance/tagger.hpp"

using namespace stance;

namespace {

std::vector<FeatureVector> random_rows(std::size_t n, std::size_t d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<FeatureVector> out(n);
  for (auto& v : out) {
    v.values.resize(d);
    for (auto& x : v.values) x = static_cast<std::int8_t>(rng() % 7 == 0);
    v.label = kAllStances[rng() % 3];
  }
  return out;
}

void BM_KnnClassify(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto rows = random_rows(n, 500, 1);
  const auto base = InstanceBase::fit(rows);
  const auto w = gain_ratio_weights(base);
  const auto queries = random_rows(64, 500, 2);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(classify(base, KnnConfig{5}, w, queries[i++ % queries.size()].values));
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_KnnClassify)->Arg(500)->Arg(2000);

void BM_ForestFit(benchmark::State& state) {
  const auto rows = random_rows(500, 300, 3);
  ForestConfig c;
  c.n_trees = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fit_forest(rows, c));
}
BENCHMARK(BM_ForestFit)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_TagSentence(benchmark::State& state) {
  std::mt19937_64 rng(4);
  const char* tags[] = {"DT", "JJ", "NN", "NNS", "VB", "VBD", "VBG", "IN", "PRP", "RB"};
  std::vector<TaggedSentence> corpus(2000);
  for (auto& s : corpus)
    for (int i = 0; i < 12; ++i) s.push_back({"w" + std::to_string(rng() % 800), tags[rng() % 10]});
  const auto model = train_tagger(corpus);
  std::vector<std::string> sentence;
  for (int i = 0; i < 20; ++i) sentence.push_back("w" + std::to_string(rng() % 1000));
  for (auto _ : state) benchmark::DoNotOptimize(tag(model, sentence));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(sentence.size()));
}
BENCHMARK(BM_TagSentence);

}  // namespace
BENCHMARK_MAIN();
