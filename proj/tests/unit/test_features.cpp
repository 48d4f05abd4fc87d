#include <doctest.h>

#include <algorithm>
#include <random>

#include "stance/error.hpp"
#include "stance/features.hpp"
#include "stance/text_io.hpp"
#include "test_support.hpp"

using namespace stance;
using stance::testing::TempDir;

namespace {

TaggedSentence tagged(std::initializer_list<std::pair<const char*, const char*>> toks) {
  TaggedSentence s;
  for (auto [w, t] : toks) s.push_back({w, t});
  return s;
}

using Values = std::vector<std::int8_t>;

const TaggedSentence kFaith =
    tagged({{"faith", "NN"}, {"means", "VBZ"}, {"believing", "VBG"}, {"in", "IN"}, {"something", "NN"}});

}  // namespace

TEST_SUITE("features") {
  TEST_CASE("scheme names") {
    for (auto s : kAllSchemes) CHECK(parse_scheme(to_string(s)) == s);
    CHECK(parse_scheme("bow_3pos") == FeatureScheme::Bow3Pos);
    CHECK_FALSE(parse_scheme("BOW").has_value());
    CHECK(is_content_tag("JJS"));
    CHECK(is_content_tag("VBZ"));
    CHECK_FALSE(is_content_tag("NNPS"));
    CHECK_FALSE(is_content_tag("IN"));
  }

  TEST_CASE("vocabulary for the faith example") {
    const std::vector<TaggedSentence> tweets{kFaith};
    const auto pos = build_vocab(tweets, FeatureScheme::Bow3Pos);
    CHECK(pos.names() == std::vector<std::string>{"believing", "faith", "means", "something"});
    const auto all = build_vocab(tweets, FeatureScheme::BowAll);
    CHECK(all.size() == 5);
    CHECK(all.find("in").has_value());
    CHECK(build_vocab(tweets, FeatureScheme::Bow3PosSentiment).vector_length() == 7);
    CHECK_THROWS_AS(build_vocab(std::vector<TaggedSentence>{}, FeatureScheme::BowAll), Error);
    CHECK_THROWS_AS(build_vocab(tweets, FeatureScheme::DepTriples), Error);
  }

  TEST_CASE("triple vocabulary") {
    const std::vector<std::vector<DepTriple>> one{{{"we", "love", "nsubj"}}};
    CHECK(build_vocab(one).names() == std::vector<std::string>{"we|love|nsubj"});
    CHECK_THROWS_AS(build_vocab(one, FeatureScheme::BowAll), Error);
  }

  TEST_CASE("presence vectors") {
    const Vocabulary vocab(FeatureScheme::BowAll, {"we", "love", "god"});
    CHECK(vocab.names() == std::vector<std::string>{"god", "love", "we"});
    const auto v = vectorize(tagged({{"we", "PRP"}, {"god", "NNP"}, {"unseen", "NN"}}), vocab, StanceLabel::Favor);
    CHECK(v.values == Values{1, 0, 1});
    CHECK(v.label == StanceLabel::Favor);
  }

  TEST_CASE("POS filter applies to the tweet as well as the vocabulary") {
    const Vocabulary vocab(FeatureScheme::Bow3Pos, {"in", "faith"});
    const auto v = vectorize(kFaith, vocab, StanceLabel::None);
    CHECK(v.values == Values{1, 0});
  }

  TEST_CASE("MPQA weighted vector") {
    const auto lex = parse_mpqa_text(
        "type=strongsubj word1=good pos1=adj stemmed1=n priorpolarity=positive\n"
        "type=strongsubj word1=bad pos1=adj stemmed1=n priorpolarity=negative\n");
    const Vocabulary vocab(FeatureScheme::MpqaWeighted, {"bad", "good", "the"});
    const auto tweet = tagged({{"good", "JJ"}, {"the", "DT"}});
    CHECK(vectorize(tweet, vocab, StanceLabel::Favor, &lex).values == Values{0, 1, 0});
    const auto neg = tagged({{"bad", "JJ"}, {"the", "DT"}});
    CHECK(vectorize(neg, vocab, StanceLabel::Favor, &lex).values == Values{-1, 0, 0});
    CHECK(vectorize(tweet, vocab, StanceLabel::Favor, &lex, nullptr, std::nullopt, VectorizeOptions{true}).values ==
          Values{0, 1, 1});
    CHECK_THROWS_AS(vectorize(tweet, vocab, StanceLabel::Favor), Error);
  }

  TEST_CASE("arguing binary vector") {
    TempDir dir;
    write_file(dir / "necessity.tff", "must( not)?\n");
    const std::vector<std::filesystem::path> pats{dir / "necessity.tff"};
    const auto lex = parse_arguing(pats, {});
    const Vocabulary vocab(FeatureScheme::ArguingBinary, {"god", "must", "we"});
    const auto tweet = tagged({{"we", "PRP"}, {"must", "MD"}});
    CHECK(vectorize(tweet, vocab, StanceLabel::Against, nullptr, &lex).values == Values{0, 1, 0});
    CHECK_THROWS_AS(vectorize(tweet, vocab, StanceLabel::Against), Error);
  }

  TEST_CASE("sentiment one-hot") {
    const Vocabulary vocab(FeatureScheme::Bow3PosSentiment, {"faith", "god"});
    const auto v = vectorize(kFaith, vocab, StanceLabel::None, nullptr, nullptr, SentimentLabel::Negative);
    CHECK(v.values == Values{1, 0, 0, 1, 0});
    CHECK(vectorize(kFaith, vocab, StanceLabel::None, nullptr, nullptr, SentimentLabel::Positive).values ==
          Values{1, 0, 1, 0, 0});
    CHECK(vectorize(kFaith, vocab, StanceLabel::None, nullptr, nullptr, SentimentLabel::Other).values ==
          Values{1, 0, 0, 0, 1});
    CHECK_THROWS_AS(vectorize(kFaith, vocab, StanceLabel::None), Error);
  }

  TEST_CASE("triple vectors") {
    const Vocabulary vocab(FeatureScheme::DepTriples, {"god|love|dobj", "love|ROOT|root", "we|love|nsubj"});
    const std::vector<DepTriple> tweet{{"we", "love", "nsubj"}, {"love", "ROOT", "root"}};
    CHECK(vectorize(tweet, vocab, StanceLabel::Favor).values == Values{0, 1, 1});
    CHECK_THROWS_AS(vectorize(kFaith, vocab, StanceLabel::Favor), Error);
  }

  TEST_CASE("feature file format") {
    TempDir dir;
    const Vocabulary vocab(FeatureScheme::BowAll, {"god", "love", "we"});
    const std::vector<FeatureVector> rows{{{1, 0, 1}, StanceLabel::Favor}};
    CHECK(format_feature_rows(rows) == "1,0,1,FAVOR\n");
    write_feature_file(rows, vocab, dir / "a.data");
    CHECK(read_file(dir / "a.data") == "1,0,1,FAVOR\n");
    CHECK(read_file(dir / "a.data.names") == "#scheme BOW_ALL\ngod\nlove\nwe\n");

    write_feature_file({}, vocab, dir / "empty.data");
    CHECK(read_file(dir / "empty.data").empty());
    const auto [v2, r2] = read_feature_file(dir / "empty.data");
    CHECK(v2 == vocab);
    CHECK(r2.empty());

    CHECK_THROWS_AS(parse_feature_rows("1,0,FAVOR\n", 3), ParseError);
    CHECK_THROWS_AS(parse_feature_rows("1,0,2,FAVOR\n", 3), ParseError);
    CHECK_THROWS_AS(parse_feature_rows("1,0,1,MAYBE\n", 3), ParseError);
  }

  TEST_CASE("property: feature file round trip") {
    TempDir dir;
    std::mt19937 rng(8);
    for (auto scheme : kAllSchemes) {
      std::vector<std::string> names;
      for (int i = 0; i < 12; ++i) names.push_back("w" + std::to_string(i));
      const Vocabulary vocab(scheme, names);
      std::vector<FeatureVector> rows(50);
      for (auto& r : rows) {
        r.values.resize(vocab.vector_length());
        for (auto& x : r.values) x = static_cast<std::int8_t>(static_cast<int>(rng() % 3) - 1);
        r.label = kAllStances[rng() % 3];
      }
      write_feature_file(rows, vocab, dir / "r.data");
      const auto [v, back] = read_feature_file(dir / "r.data");
      REQUIRE(v == vocab);
      REQUIRE(back == rows);
    }
  }

  TEST_CASE("property: presence, ordering and lexicon invariants") {
    TempDir dir;
    write_file(dir / "p.tff", "(a|c)[a-z]*\n");
    const std::vector<std::filesystem::path> pats{dir / "p.tff"};
    const auto arguing = parse_arguing(pats, {});
    const auto mpqa = parse_mpqa_text(
        "type=strongsubj word1=ab pos1=adj stemmed1=n priorpolarity=positive\n"
        "type=weaksubj word1=cd pos1=adj stemmed1=n priorpolarity=negative\n");
    const char* words[] = {"ab", "cd", "ef", "gh", "ca", "bd"};
    const char* tags[] = {"NN", "VB", "IN", "JJ", "DT"};
    std::mt19937 rng(12);
    auto random_tweet = [&] {
      TaggedSentence s;
      for (int n = 1 + static_cast<int>(rng() % 6); n > 0; --n) s.push_back({words[rng() % 6], tags[rng() % 5]});
      return s;
    };
    for (int round = 0; round < 300; ++round) {
      std::vector<TaggedSentence> train(1 + rng() % 5);
      for (auto& t : train) t = random_tweet();
      auto shuffled = train;
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      for (auto scheme : {FeatureScheme::Bow3Pos, FeatureScheme::BowAll, FeatureScheme::MpqaWeighted,
                          FeatureScheme::ArguingBinary}) {
        REQUIRE(build_vocab(train, scheme) == build_vocab(shuffled, scheme));
      }
      const auto all_vocab = build_vocab(train, FeatureScheme::BowAll);
      const Vocabulary mpqa_vocab(FeatureScheme::MpqaWeighted, all_vocab.names());
      const Vocabulary arg_vocab(FeatureScheme::ArguingBinary, all_vocab.names());
      const auto tweet = random_tweet();
      auto doubled = tweet;
      doubled.insert(doubled.end(), tweet.begin(), tweet.end());

      const auto bow = vectorize(tweet, all_vocab, StanceLabel::None);
      REQUIRE(bow == vectorize(doubled, all_vocab, StanceLabel::None));
      const auto m = vectorize(tweet, mpqa_vocab, StanceLabel::None, &mpqa);
      const auto a = vectorize(tweet, arg_vocab, StanceLabel::None, nullptr, &arguing);
      REQUIRE(m.values.size() == bow.values.size());
      REQUIRE(a.values.size() == bow.values.size());
      for (std::size_t i = 0; i < bow.values.size(); ++i) {
        if (bow.values[i] == 0) REQUIRE(m.values[i] == 0);
        REQUIRE(a.values[i] <= bow.values[i]);
      }
    }
  }
}
