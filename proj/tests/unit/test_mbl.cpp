#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "stance/error.hpp"
#include "stance/mbl.hpp"

using namespace stance;

namespace {

constexpr auto F = StanceLabel::Favor;
constexpr auto A = StanceLabel::Against;
constexpr auto N = StanceLabel::None;

FeatureVector fv(std::vector<std::int8_t> v, StanceLabel l) { return {std::move(v), l}; }

std::vector<FeatureVector> random_base(std::mt19937& rng, std::size_t n, std::size_t d) {
  std::vector<FeatureVector> out(n);
  for (auto& v : out) {
    v.values.resize(d);
    for (auto& x : v.values) x = static_cast<std::int8_t>(static_cast<int>(rng() % 3) - 1);
    v.label = kAllStances[rng() % 3];
  }
  return out;
}

}  // namespace

TEST_SUITE("mbl") {
  TEST_CASE("fit stores instances verbatim") {
    const std::vector<FeatureVector> three{fv({1, 0}, F), fv({0, 1}, A), fv({1, 0}, A)};
    const auto base = InstanceBase::fit(three);
    CHECK(base.size() == 3);
    CHECK(base.feature_count() == 2);
    const auto& f = base.class_frequencies();
    CHECK(f[0] + f[1] + f[2] == 3);
    CHECK(base.row(2)[0] == 1);
    CHECK(base.label(2) == A);
    CHECK_THROWS_AS(InstanceBase::fit({}), Error);
    const std::vector<FeatureVector> ragged{fv({1, 0}, F), fv({1}, F)};
    CHECK_THROWS_AS(InstanceBase::fit(ragged), Error);
  }

  TEST_CASE("single instance decides every query at k=1") {
    const std::vector<FeatureVector> one{fv({1, -1, 0}, N)};
    const auto base = InstanceBase::fit(one);
    const std::vector<double> w(3, 1.0);
    const std::vector<std::int8_t> q{0, 0, 1};
    CHECK(classify(base, KnnConfig{}, w, q) == N);
  }

  TEST_CASE("gain ratio fixtures") {
    // values (a,a,b,b) against classes (+,+,-,-)
    const std::vector<FeatureVector> informative{fv({0, 0, 1}, F), fv({0, 1, 1}, F), fv({1, 0, 1}, A),
                                                 fv({1, 1, 1}, A)};
    const auto w = gain_ratio_weights(InstanceBase::fit(informative));
    CHECK(w[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(w[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(w[2] == 0.0);
    CHECK(weights_for(InstanceBase::fit(informative), Weighting::None) == FeatureWeights{1, 1, 1});
  }

  TEST_CASE("overlap distance") {
    const std::vector<std::int8_t> a{1, 0, 1}, b{1, 1, 0};
    const std::vector<double> unit(3, 1.0);
    CHECK(overlap_distance(a, a, unit) == 0.0);
    CHECK(overlap_distance(a, b, unit) == 2.0);
    const std::vector<std::int8_t> c{-1, 0}, d{1, 0};
    const std::vector<double> w{0.5, 3};
    CHECK(overlap_distance(c, d, w) == 0.5);
    CHECK_THROWS_AS(overlap_distance(a, c, unit), Error);
  }

  TEST_CASE("vote tie chain") {
    const LabelCounts freq_fav{5, 3, 1};  // FAVOR, AGAINST, NONE
    CHECK(vote({1, 1, 0}, freq_fav) == F);
    CHECK(vote({1, 1, 0}, {3, 3, 1}) == A);
    CHECK(vote({0, 1, 1}, {0, 2, 2}) == A);
    CHECK(vote({1, 0, 1}, {2, 0, 2}) == F);
    CHECK(vote({0, 0, 2}, freq_fav) == N);
  }

  TEST_CASE("classify examples") {
    SUBCASE("exact match at k=1") {
      const std::vector<FeatureVector> rows{fv({1, 0, 0}, F), fv({0, 1, 0}, A), fv({0, 0, 1}, N)};
      const auto base = InstanceBase::fit(rows);
      const std::vector<double> w(3, 1.0);
      for (const auto& r : rows) CHECK(classify(base, KnnConfig{}, w, r.values) == r.label);
    }
    SUBCASE("equidistant neighbours both join at k=1") {
      // FAVOR and AGAINST both at distance 1, NONE at 2; class frequency
      // favours FAVOR.
      const std::vector<FeatureVector> rows{fv({1, 0}, F), fv({0, 1}, A), fv({1, 1}, N), fv({1, 1}, F)};
      const auto base = InstanceBase::fit(rows);
      const std::vector<double> w(2, 1.0);
      const std::vector<std::int8_t> q{0, 0};
      CHECK(classify(base, KnnConfig{1, Weighting::None}, w, q) == F);
      KnnConfig inst{1, Weighting::None, NeighborSemantics::NearestInstances};
      CHECK(classify(base, inst, w, q) == A);
    }
    SUBCASE("k counts distances, not instances") {
      const std::vector<FeatureVector> rows{fv({0, 0}, F), fv({0, 1}, A), fv({1, 0}, A), fv({1, 1}, A),
                                            fv({0, 0}, F)};
      const auto base = InstanceBase::fit(rows);
      const std::vector<double> w(2, 1.0);
      const std::vector<std::int8_t> q{0, 0};
      CHECK(classify(base, KnnConfig{1, Weighting::None}, w, q) == F);
      CHECK(classify(base, KnnConfig{2, Weighting::None}, w, q) == A);  // 2 FAVOR vs 2 AGAINST, AGAINST more frequent
      KnnConfig inst{3, Weighting::None, NeighborSemantics::NearestInstances};
      CHECK(classify(base, inst, w, q) == F);
    }
    const std::vector<FeatureVector> rows{fv({1, 0}, F)};
    const auto base = InstanceBase::fit(rows);
    const std::vector<double> w(2, 1.0);
    const std::vector<std::int8_t> wrong{1};
    CHECK_THROWS_AS(classify(base, KnnConfig{}, w, wrong), Error);
  }

  TEST_CASE("sweep_k") {
    std::mt19937 rng(2);
    SUBCASE("train as test with unique instances") {
      std::vector<FeatureVector> rows;
      for (int i = 0; i < 16; ++i) {
        std::vector<std::int8_t> v(4);
        for (int b = 0; b < 4; ++b) v[b] = static_cast<std::int8_t>((i >> b) & 1);
        rows.push_back(fv(v, kAllStances[rng() % 3]));
      }
      const auto base = InstanceBase::fit(rows);
      const auto w = weights_for(base, Weighting::None);
      const std::vector<std::size_t> ks{1};
      CHECK(sweep_k(base, w, rows, ks) == std::vector<std::pair<std::size_t, double>>{{1, 1.0}});
    }
    SUBCASE("label noise makes k matter") {
      // Feature 0 decides the class over all 64 distinct 6-bit vectors; two
      // far-apart training labels are flipped, so k=1 copies the mistakes
      // while k=3 lets the distance-1 neighbours outvote them.
      std::vector<FeatureVector> train, test;
      for (int i = 0; i < 64; ++i) {
        std::vector<std::int8_t> v(6);
        for (int b = 0; b < 6; ++b) v[b] = static_cast<std::int8_t>((i >> b) & 1);
        const auto clean = v[0] ? F : A;
        const bool flip = i == 5 || i == 58;
        train.push_back(fv(v, flip ? (clean == F ? A : F) : clean));
        test.push_back(fv(v, clean));
      }
      const auto base = InstanceBase::fit(train);
      const auto w = weights_for(base, Weighting::None);
      const std::vector<std::size_t> ks{1, 3, 3, 1};
      const auto out = sweep_k(base, w, test, ks);
      REQUIRE(out.size() == 4);
      CHECK(out[0].first == 1);
      CHECK(out[0].second == doctest::Approx(62.0 / 64));
      CHECK(out[1].second == 1.0);
      CHECK(out[1] == out[2]);
      CHECK(out[0] == out[3]);
      CHECK(out[0].second != out[1].second);
    }
  }

  TEST_CASE("sweep_k equals repeated classify") {
    std::mt19937 rng(17);
    for (int round = 0; round < 50; ++round) {
      const auto train = random_base(rng, 1 + rng() % 30, 1 + rng() % 8);
      auto test = random_base(rng, 10, train[0].values.size());
      const auto base = InstanceBase::fit(train);
      const auto w = gain_ratio_weights(base);
      const std::vector<std::size_t> ks{1, 2, 5, 9};
      for (auto sem : {NeighborSemantics::NearestDistances, NeighborSemantics::NearestInstances}) {
        const auto out = sweep_k(base, w, test, ks, sem);
        for (std::size_t j = 0; j < ks.size(); ++j) {
          std::size_t hits = 0;
          for (const auto& q : test)
            hits += classify(base, KnnConfig{ks[j], Weighting::GainRatio, sem}, w, q.values) == q.label;
          REQUIRE(out[j].second == doctest::Approx(double(hits) / double(test.size())));
        }
      }
    }
  }

  TEST_CASE("property: gain ratio within [0,1] and classify independent of insertion order") {
    std::mt19937 rng(23);
    for (int round = 0; round < 300; ++round) {
      auto rows = random_base(rng, 1 + rng() % 25, 1 + rng() % 10);
      const auto base = InstanceBase::fit(rows);
      const auto w = gain_ratio_weights(base);
      for (double x : w) REQUIRE((x >= 0.0 && x <= 1.0));
      auto shuffled = rows;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      const auto base2 = InstanceBase::fit(shuffled);
      const auto w2 = gain_ratio_weights(base2);
      for (std::size_t f = 0; f < w.size(); ++f) REQUIRE(w[f] == doctest::Approx(w2[f]).epsilon(1e-12));
      const auto q = random_base(rng, 1, rows[0].values.size())[0].values;
      for (std::size_t k : {1, 2, 4}) {
        for (auto sem : {NeighborSemantics::NearestDistances, NeighborSemantics::NearestInstances}) {
          const KnnConfig c{k, Weighting::GainRatio, sem};
          REQUIRE(classify(base, c, w, q) == classify(base2, c, w, q));
        }
      }
    }
  }

  TEST_CASE("property: large k gives the tie-broken majority of the whole base") {
    std::mt19937 rng(29);
    for (int round = 0; round < 200; ++round) {
      const auto rows = random_base(rng, 1 + rng() % 20, 1 + rng() % 6);
      const auto base = InstanceBase::fit(rows);
      const auto w = weights_for(base, Weighting::None);
      const auto q = random_base(rng, 1, rows[0].values.size())[0].values;
      const auto expected = vote(base.class_frequencies(), base.class_frequencies());
      REQUIRE(classify(base, KnnConfig{rows.size() + 1, Weighting::None}, w, q) == expected);
      REQUIRE(expected == argmax_label(base.class_frequencies()));
    }
  }

  TEST_CASE("model save and load") {
    std::mt19937 rng(31);
    const auto rows = random_base(rng, 20, 6);
    const auto model = KnnModel::train(rows, KnnConfig{3, Weighting::GainRatio, NeighborSemantics::NearestInstances});
    std::stringstream buf;
    model.save(buf);
    const auto back = KnnModel::load(buf);
    CHECK(back.config.k == 3);
    CHECK(back.config.neighbors == NeighborSemantics::NearestInstances);
    CHECK(back.weights == model.weights);
    for (const auto& r : random_base(rng, 30, 6)) CHECK(back.predict(r.values) == model.predict(r.values));
    std::stringstream junk("stance-knn 7\n");
    CHECK_THROWS_AS(KnnModel::load(junk), Error);
  }

  TEST_CASE("agrees with the brute-force oracle") {
    std::mt19937 rng(37);
    for (int round = 0; round < 100; ++round) {
      const auto rows = random_base(rng, 1 + rng() % 20, 1 + rng() % 8);
      const auto base = InstanceBase::fit(rows);
      const auto w = gain_ratio_weights(base);
      const auto q = random_base(rng, 1, rows[0].values.size())[0].values;
      for (std::size_t k : {1, 3, 5})
        for (auto sem : {NeighborSemantics::NearestDistances, NeighborSemantics::NearestInstances})
          REQUIRE(classify(base, KnnConfig{k, Weighting::GainRatio, sem}, w, q) == oracle::knn(rows, w, q, k, sem));
    }
  }
}
