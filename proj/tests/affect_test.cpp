#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "gdm/affect.hpp"
#include "gdm/error.hpp"
#include "support.hpp"

using namespace gdm::affect;

namespace {

const AffectAnalyzer& analyzer() { return gdm::test::engine().affect; }

}  // namespace

TEST_CASE("tokenize") {
  CHECK(tokenize("").tokens.empty());

  const auto t = tokenize("Great food!!");
  REQUIRE(t.tokens.size() == 2);
  CHECK(t.tokens[0].text == "Great");
  CHECK(t.tokens[0].lower == "great");
  CHECK(t.tokens[1].text == "food");
  CHECK(t.exclamations == 2);

  const auto n = tokenize("not good");
  REQUIRE(n.tokens.size() == 2);
  CHECK(n.tokens[0].lower == "not");

  // Short tokens keep their punctuation so emoticons survive.
  const auto e = tokenize("nice :) ok?");
  REQUIRE(e.tokens.size() == 3);
  CHECK(e.tokens[1].text == ":)");
  CHECK(e.questions == 1);
}

TEST_CASE("compound sentiment on known sentences") {
  const auto& a = analyzer();
  CHECK(a.sentiment("") == 0.0);
  CHECK(a.sentiment("VADER is smart, handsome, and funny.") == doctest::Approx(0.8316).epsilon(1e-9));
  CHECK(a.sentiment("The table is made of wood.") == 0.0);
  CHECK(a.sentiment("The place is nice.") == doctest::Approx(0.4215));
}

TEST_CASE("compound sentiment heuristics") {
  const auto& a = analyzer();
  CHECK(a.sentiment("The food is not good.") < a.sentiment("The food is good."));
  CHECK(a.sentiment("The food is good.") < a.sentiment("The food is very good."));
  CHECK(a.sentiment("The food is GOOD.") > a.sentiment("The food is good."));
  CHECK(a.sentiment("The food is good!") > a.sentiment("The food is good."));
  CHECK(a.sentiment("The food is good, but the service is bad.") < a.sentiment("The food is good."));
  CHECK(a.sentiment("The food is good :)") > a.sentiment("The food is good"));
}

TEST_CASE("repetition never shrinks the magnitude") {
  const auto& a = analyzer();
  for (const char* t : {"good", "The staff is rude.", "Nice place", "awful, awful service", "meh"}) {
    const std::string twice = std::string(t) + " " + t;
    CHECK(std::abs(a.sentiment(twice)) >= std::abs(a.sentiment(t)));
  }
}

TEST_CASE("sentiment stays in [-1, 1]") {
  const auto& a = analyzer();
  std::string loud;
  for (int i = 0; i < 50; ++i) loud += "AMAZING WONDERFUL ";
  CHECK(a.sentiment(loud) <= 1.0);
  std::string grim;
  for (int i = 0; i < 50; ++i) grim += "horrible awful ";
  CHECK(a.sentiment(grim) >= -1.0);
}

TEST_CASE("sentiment oracle corpus") {
  std::ifstream in(gdm::test::fixture_dir() + "/sentiment_oracle.tsv");
  REQUIRE(in);
  std::string line;
  double total = 0;
  int n = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    const double expected = std::stod(line.substr(0, tab));
    const std::string text = line.substr(tab + 1);
    const double got = analyzer().sentiment(text);
    CHECK_MESSAGE(std::abs(got - expected) < 0.05, text);
    total += std::abs(got - expected);
    ++n;
  }
  CHECK(n == 50);
  CHECK(total / n <= 0.05);
}

TEST_CASE("emotion vector") {
  const auto& a = analyzer();
  CHECK(a.emotions("") == EmotionVector{});
  CHECK(a.emotions("the table is made of wood") == EmotionVector{});

  const auto v = a.emotions("glad and happy but sad and afraid");
  CHECK(v.happy == doctest::Approx(0.5));
  CHECK(v.surprise == 0.0);
  CHECK(v.angry == 0.0);
  CHECK(v.sad == doctest::Approx(0.25));
  CHECK(v.fear == doctest::Approx(0.25));
  CHECK(v.happy + v.surprise + v.angry + v.sad + v.fear == doctest::Approx(1.0));
}

TEST_CASE("emotion score") {
  CHECK(emotion_score({0.5, 0.2, 0.1, 0.3, 0.0}) == doctest::Approx(0.2));
  CHECK(emotion_score({}) == 0.0);
  CHECK(emotion_score({0, 1, 0, 0, 1}) == 0.0);
}

TEST_CASE("fused affect") {
  const auto s = fuse_affect(0.5, 0.25, AffectWeights::fused());
  CHECK(s.preference == doctest::Approx(0.4));
  CHECK(fuse_affect(0.21, -0.9, AffectWeights::sentiment_only()).preference == doctest::Approx(0.21));
  CHECK(fuse_affect(0, 0, AffectWeights::fused()).preference == 0.0);

  CHECK_THROWS_WITH_AS(fuse_affect(0.1, 0.1, {0.5, 0.6}), doctest::Contains("invalid affect weights"), gdm::Error);
  CHECK_THROWS_AS(validate(AffectWeights{1.2, -0.2}), gdm::Error);
  CHECK_NOTHROW(validate(AffectWeights{0.3, 0.7}));
}

TEST_CASE("analyzer score combines both channels") {
  const auto& a = analyzer();
  const std::string text = "I am so happy with this place, wow!";
  const auto sc = a.score(text, AffectWeights::fused());
  CHECK(sc.sentiment == a.sentiment(text));
  CHECK(sc.emotion == emotion_score(a.emotions(text)));
  CHECK(sc.preference == doctest::Approx(0.6 * sc.sentiment + 0.4 * sc.emotion).epsilon(1e-12));
  CHECK(sc.alpha == 0.6);
  CHECK(sc.beta == 0.4);
}

TEST_CASE("lexicon files") {
  gdm::test::TempDir dir;
  gdm::test::spit(dir / "lex.tsv", "# comment\n\ngood\t1.9\t0.9\t[2, 2]\nbad\tx\n");
  CHECK_THROWS_WITH_AS(load_sentiment_lexicon(dir / "lex.tsv"), doctest::Contains("lex.tsv:4"), gdm::Error);

  gdm::test::spit(dir / "emo.tsv", "joy\thappy\ngrr\tgrumpy\n");
  CHECK_THROWS_AS(load_emotion_lexicon(dir / "emo.tsv"), gdm::Error);

  gdm::test::spit(dir / "ok.tsv", "# c\njoy\thappy\nfright\tfear\n");
  const auto lex = load_emotion_lexicon(dir / "ok.tsv");
  CHECK(lex.entries.size() == 2);
  CHECK(lex.entries.at("fright") == Emotion::Fear);

  CHECK_THROWS_AS(load_sentiment_lexicon(dir / "missing.tsv"), gdm::Error);
  CHECK_THROWS_AS(parse_emotion("joyful"), gdm::Error);
  CHECK(std::string(to_string(Emotion::Surprise)) == "surprise");
}
