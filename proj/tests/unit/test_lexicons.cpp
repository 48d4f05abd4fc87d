#include <doctest.h>

#include <random>

#include "stance/error.hpp"
#include "stance/lexicons.hpp"
#include "stance/porter.hpp"
#include "stance/text_io.hpp"
#include "test_support.hpp"

using namespace stance;
using stance::testing::TempDir;

namespace {

std::filesystem::path write(const TempDir& dir, const std::string& name, const std::string& content) {
  const auto p = dir / name;
  write_file(p, content);
  return p;
}

}  // namespace

TEST_SUITE("lexicons") {
  TEST_CASE("porter stem examples") {
    CHECK(porter_stem("believing") == "believ");
    CHECK(porter_stem("god") == "god");
    CHECK(porter_stem("") == "");
    CHECK(porter_stem("oppose") == "oppos");
    CHECK(porter_stem("relational") == "relat");
    CHECK(porter_stem("hopping") == "hop");
  }

  TEST_CASE("porter agrees with an independent implementation on a frozen word list") {
    const auto content = read_file(stance::testing::test_data_dir() / "porter_pairs.tsv");
    std::size_t checked = 0;
    for (auto line : split_lines(content)) {
      if (line.empty() || line.front() == '#') continue;
      const auto tab = line.find('\t');
      REQUIRE(tab != std::string_view::npos);
      const auto word = line.substr(0, tab);
      const auto stem = line.substr(tab + 1);
      INFO(word);
      REQUIRE(porter_stem(word) == stem);
      REQUIRE(porter_stem(word).size() <= word.size());
      ++checked;
    }
    CHECK(checked > 2000);
  }

  TEST_CASE("parse_mpqa") {
    const auto lex = parse_mpqa_text(
        "type=weaksubj len=1 word1=abandoned pos1=adj stemmed1=n priorpolarity=negative\n"
        "\n"
        "type=strongsubj len=1 word1=abandon pos1=verb stemmed1=y priorpolarity=negative\n"
        "type=weaksubj len=1 word1=abandon pos1=noun stemmed1=n priorpolarity=neutral\n");
    CHECK(lex.size() == 3);
    const auto e = lex.lookup("abandoned");
    REQUIRE(e.size() == 1);
    CHECK(e[0] == MpqaEntry{"abandoned", "adj", false, Strength::Weak, Polarity::Negative});
    CHECK(lex.lookup("abandon").size() == 2);
    CHECK(lex.lookup("nothing").empty());
    CHECK(parse_mpqa_text("").size() == 0);
  }

  TEST_CASE("parse_mpqa errors carry the line number") {
    try {
      parse_mpqa_text("type=weaksubj word1=a priorpolarity=positive\ntype=weaksubj word1=b\n", "m.tff");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.file() == "m.tff");
    }
    CHECK_THROWS_AS(parse_mpqa_text("type=weaksubj pos1=adj priorpolarity=positive\n"), ParseError);
    CHECK_THROWS_AS(parse_mpqa_text("word1=a priorpolarity=sideways\n"), ParseError);
    CHECK_THROWS_AS(parse_mpqa("/nonexistent/mpqa.tff"), Error);
  }

  TEST_CASE("lookup_polarity") {
    const auto lex = parse_mpqa_text(
        "type=strongsubj word1=good pos1=adj stemmed1=n priorpolarity=positive\n"
        "type=strongsubj word1=bad pos1=adj stemmed1=n priorpolarity=negative\n"
        "type=weaksubj word1=fine pos1=adj stemmed1=n priorpolarity=neutral\n"
        "type=weaksubj word1=mixed pos1=adj stemmed1=n priorpolarity=both\n"
        "type=strongsubj word1=oppose pos1=verb stemmed1=y priorpolarity=negative\n"
        "type=weaksubj word1=hope pos1=noun stemmed1=n priorpolarity=positive\n"
        "type=weaksubj word1=hope pos1=verb stemmed1=y priorpolarity=negative\n"
        "type=strongsubj word1=cool pos1=adj stemmed1=n priorpolarity=positive\n"
        "type=weaksubj word1=cool pos1=verb stemmed1=n priorpolarity=negative\n"
        "type=weaksubj word1=odd pos1=adj stemmed1=n priorpolarity=positive\n"
        "type=weaksubj word1=odd pos1=noun stemmed1=n priorpolarity=negative\n");
    CHECK(lookup_polarity(lex, "good") == 1);
    CHECK(lookup_polarity(lex, "bad") == -1);
    CHECK(lookup_polarity(lex, "absent") == 0);
    CHECK(lookup_polarity(lex, "fine") == 0);
    CHECK(lookup_polarity(lex, "mixed") == 0);
    CHECK(lookup_polarity(lex, "") == 0);
    SUBCASE("stemmed entries cover inflections") {
      CHECK(lookup_polarity(lex, "opposing") == -1);
      CHECK(lookup_polarity(lex, "opposed") == -1);
      CHECK(lookup_polarity(lex, "oppose") == -1);
    }
    SUBCASE("surface match wins over stem match") {
      CHECK(lookup_polarity(lex, "hope") == 1);
      CHECK(lookup_polarity(lex, "hoping") == -1);
    }
    SUBCASE("conflicts: strong beats weak, an unresolved conflict is 0") {
      CHECK(lookup_polarity(lex, "cool") == 1);
      CHECK(lookup_polarity(lex, "odd") == 0);
    }
  }

  TEST_CASE("macro expansion") {
    const std::map<std::string, std::string> macros{{"BE", "(is|am|are)"}, {"BEING", "(@BE|being)"}};
    CHECK(expand_macros("@BE certain", macros) == "(is|am|are) certain");
    CHECK(expand_macros("@BEING sure", macros) == "((is|am|are)|being) sure");
    CHECK(expand_macros("no macros", macros) == "no macros");
    CHECK_THROWS_AS(expand_macros("@NOPE", macros), Error);
    const std::map<std::string, std::string> cyclic{{"A", "(@B)"}, {"B", "(@A)"}};
    CHECK_THROWS_AS(expand_macros("@A", cyclic), Error);
  }

  TEST_CASE("macro files accept both alternation forms") {
    const auto m = parse_arguing_macros("#class=\"macros\"\n@BE=(is|am|are)\n@MODAL={must, should , ought}\n");
    CHECK(m.at("BE") == "(is|am|are)");
    CHECK(m.at("MODAL") == "(must|should|ought)");
    CHECK_THROWS_AS(parse_arguing_macros("BE=(is)\n"), ParseError);
    CHECK_THROWS_AS(parse_arguing_macros("@BE (is)\n"), ParseError);
  }

  TEST_CASE("parse_arguing and match_arguing") {
    TempDir dir;
    const auto macros = write(dir, "modals.tff", "@BE=(is|am|are)\n@MODAL={must, should}\n");
    const auto necessity = write(dir, "necessity.tff", "#class=\"necessity\"\nmust( not)?\n@MODAL\n");
    const auto certainty = write(dir, "certainty.tff", "@BE certain\n");
    const std::vector<std::filesystem::path> pats{necessity, certainty}, macs{macros};
    const auto lex = parse_arguing(pats, macs);
    CHECK(lex.patterns().size() == 3);
    CHECK(lex.categories() == std::vector<std::string>{"certainty", "necessity"});
    CHECK(lex.patterns()[2].source == "(is|am|are) certain");
    for (const auto& p : lex.patterns()) CHECK(p.source.find('@') == std::string::npos);

    CHECK(match_arguing(lex, "must"));
    CHECK(match_arguing(lex, "Should"));
    CHECK(match_arguing(lex, "must not"));
    CHECK_FALSE(match_arguing(lex, "god"));
    CHECK_FALSE(match_arguing(lex, ""));
    CHECK_FALSE(match_arguing(lex, "mustard"));

    auto search = lex;
    search.mode = ArguingMatchMode::Search;
    CHECK(match_arguing(search, "mustard"));
    CHECK_FALSE(match_arguing(search, "god"));

    CHECK(parse_arguing({}, {}).patterns().empty());
  }

  TEST_CASE("parse_arguing errors name the file and line") {
    TempDir dir;
    const auto bad = write(dir, "bad.tff", "fine\n(unclosed\n");
    const std::vector<std::filesystem::path> pats{bad};
    try {
      parse_arguing(pats, {});
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
      CHECK(e.file() == bad.string());
    }
    const auto undefined = write(dir, "undef.tff", "@MISSING thing\n");
    const std::vector<std::filesystem::path> pats2{undefined};
    CHECK_THROWS_AS(parse_arguing(pats2, {}), ParseError);
  }

  TEST_CASE("property: matching never throws and polarity stays in range") {
    TempDir dir;
    const auto pats = std::vector<std::filesystem::path>{
        write(dir, "p.tff", "must( not)?\n(is|are) (certain|sure)\n[a-z]+ly\n.*\\?\n")};
    const auto lex = parse_arguing(pats, {});
    const auto mpqa = parse_mpqa(stance::testing::synthetic_dir() / "mpqa.tff");
    std::mt19937 rng(1);
    const std::string alphabet = "abcdeilmnorstuy?*()[]\\.+ ";
    for (int i = 0; i < 3000; ++i) {
      std::string w;
      for (int n = static_cast<int>(rng() % 12); n > 0; --n) w.push_back(alphabet[rng() % alphabet.size()]);
      REQUIRE_NOTHROW(match_arguing(lex, w));
      const int p = lookup_polarity(mpqa, w);
      REQUIRE((p == -1 || p == 0 || p == 1));
    }
  }
}
