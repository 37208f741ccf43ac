#include <doctest.h>

#include <fstream>

#include "blame/error.hpp"
#include "blame/lexicon.hpp"
#include "support/fixtures.hpp"

using namespace blame;
using blame::testing::TempDir;

namespace {

std::filesystem::path write(const TempDir& dir, const std::string& name, const std::string& content) {
  const auto p = dir.path() / name;
  std::ofstream(p) << content;
  return p;
}

}  // namespace

TEST_CASE("shipped registry is complete") {
  const auto& reg = testing::shipped_lexicons();
  CHECK(reg.missing().empty());
  for (const auto& name : required_lexicons()) {
    CAPTURE(name);
    CHECK(reg.has(name));
    CHECK(reg.get(name).size() >= 40);
  }
  CHECK(required_lexicons().size() == 9);
}

TEST_CASE("connotation frame row for betray") {
  const auto& cf = testing::shipped_lexicons().get("connotation_frames");
  const auto v = cf.lookup("betray");
  REQUIRE(v.has_value());
  CHECK((*v)[cf.dimension_index("perspective_agent")] == -0.67);
  CHECK((*v)[cf.dimension_index("perspective_theme")] == 0.26);
  CHECK((*v)[cf.dimension_index("value_agent")] == 0.47);
  CHECK((*v)[cf.dimension_index("value_theme")] == 0.87);
  CHECK((*v)[cf.dimension_index("effect_agent")] == 0.067);
  CHECK((*v)[cf.dimension_index("effect_theme")] == -0.93);
  CHECK((*v)[cf.dimension_index("mental_agent")] == -0.03);
  CHECK((*v)[cf.dimension_index("mental_theme")] == -0.67);
}

TEST_CASE("fixture lookups") {
  const auto& reg = testing::shipped_lexicons();
  const auto& emo = reg.get("emotion");
  const auto love = emo.lookup("love");
  REQUIRE(love.has_value());
  CHECK((*love)[emo.dimension_index("joy")] == 1.0);
  CHECK_FALSE(reg.get("vad").lookup("zzzz").has_value());
  const auto terrible = reg.get("subjectivity").lookup("terrible");
  REQUIRE(terrible.has_value());
  CHECK((*terrible)[0] == 1.0);
  CHECK(reg.get("sentiment").lookup("good").value()[0] == 1.9);
  bool some_positive_agency = false;
  const auto& pa = reg.get("power_agency");
  for (const char* w : {"love", "help", "protect", "give"}) {
    if (auto v = pa.lookup(w); v && (*v)[pa.dimension_index("agency")] == 1.0) some_positive_agency = true;
  }
  CHECK(some_positive_agency);
}

TEST_CASE("lookup is case-insensitive and deterministic") {
  const auto& cf = testing::shipped_lexicons().get("connotation_frames");
  const auto a = cf.lookup("BeTrAy"), b = cf.lookup("betray");
  REQUIRE(a.has_value());
  CHECK(a->data() == b->data());
}

TEST_CASE("every loaded score lies in its declared range") {
  const auto& reg = testing::shipped_lexicons();
  for (const auto& name : required_lexicons()) {
    const auto& schema = builtin_schema(name);
    std::ifstream in(testing::data_path("lexicons") / (name + ".tsv"));
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      const auto lemma = line.substr(0, line.find('\t'));
      const auto v = reg.get(name).lookup(lemma);
      REQUIRE(v.has_value());
      for (std::size_t d = 0; d < v->size(); ++d) {
        CHECK((*v)[d] >= schema.ranges[d].min);
        CHECK((*v)[d] <= schema.ranges[d].max);
        CHECK(std::abs((*v)[d]) <= reg.get(name).max_abs(d));
      }
    }
  }
}

TEST_CASE("load errors") {
  TempDir dir("lex");
  const auto& vad = builtin_schema("vad");
  CHECK_THROWS_WITH_AS(load_lexicon(write(dir, "a.tsv", "lemma\tvalence\tarousal\tdominance\nx\t1.5\t0\t0\n"), vad),
                       doctest::Contains("outside"), DataError);
  CHECK_THROWS_WITH_AS(load_lexicon(write(dir, "b.tsv", "lemma\tvalence\tdominance\nx\t0.5\t0\n"), vad),
                       doctest::Contains("arousal"), DataError);
  CHECK_THROWS_WITH_AS(load_lexicon(write(dir, "c.tsv", ""), vad), doctest::Contains("empty"), DataError);
  CHECK_THROWS_AS(load_lexicon(write(dir, "d.tsv", "lemma\tvalence\tarousal\tdominance\nx\tbig\t0\t0\n"), vad),
                  DataError);
  CHECK_THROWS_AS(load_lexicon(dir.path() / "nope.tsv", vad), MissingArtifact);
}

TEST_CASE("duplicates: last wins and is counted") {
  TempDir dir("lex");
  const auto lex = load_lexicon(
      write(dir, "v.tsv", "lemma\tvalence\tarousal\tdominance\nCalm\t0.1\t0.2\t0.3\ncalm\t0.9\t0.2\t0.3\n"),
      builtin_schema("vad"));
  CHECK(lex.size() == 1);
  CHECK(lex.duplicate_count() == 1);
  CHECK(lex.lookup("calm").value()[0] == 0.9);
}

TEST_CASE("word list files score 1") {
  TempDir dir("lex");
  const auto lex = load_lexicon(write(dir, "h.tsv", "lemma\n# hedges\nmaybe\nperhaps\n"), builtin_schema("hedge"));
  CHECK(lex.size() == 2);
  CHECK(lex.lookup("maybe").value()[0] == 1.0);
}

TEST_CASE("categorical subjectivity labels") {
  TempDir dir("lex");
  const auto lex = load_lexicon(write(dir, "s.tsv", "lemma\tsubjectivity\nodd\tweaksubj\nawful\tstrongsubj\n"),
                                builtin_schema("subjectivity"));
  CHECK(lex.lookup("odd").value()[0] == 0.5);
  CHECK(lex.lookup("awful").value()[0] == 1.0);
}

TEST_CASE("registry completeness") {
  LexiconRegistry reg;
  CHECK(reg.missing().size() == 9);
  CHECK_THROWS_WITH_AS(reg.require_complete(), doctest::Contains("connotation_frames"), DataError);
  CHECK_THROWS_AS(reg.get("vad"), DataError);
  CHECK_THROWS_AS(builtin_schema("nope"), std::out_of_range);
  TempDir dir("reg");
  std::filesystem::copy_file(testing::data_path("lexicons/vad.tsv"), dir.path() / "vad.tsv");
  try {
    load_registry(dir.path());
    FAIL("expected DataError");
  } catch (const DataError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("emfd") != std::string::npos);
    CHECK(msg.find("hedge") != std::string::npos);
    CHECK(msg.find("vad") == std::string::npos);
  }
}
