#include <doctest.h>

#include <fstream>

#include "blame/error.hpp"
#include "blame/persona.hpp"
#include "support/fixtures.hpp"
#include "support/random_docs.hpp"

using namespace blame;
using blame::testing::tok;

namespace {

const PeopleLexicon& people() { return testing::shipped_people(); }

// "I love my sister. She left."
AnnotatedDoc sister_doc(bool with_chain) {
  AnnotatedDoc d;
  d.id = "sister";
  d.sentences.push_back({{tok("I", "I", Pos::PRON, 1, "nsubj"), tok("love", "love", Pos::VERB, kRoot, "ROOT"),
                          tok("my", "my", Pos::PRON, 3, "poss"), tok("sister", "sister", Pos::NOUN, 1, "dobj")}});
  d.sentences.push_back({{tok("She", "she", Pos::PRON, 1, "nsubj"), tok("left", "leave", Pos::VERB, kRoot, "ROOT")}});
  if (with_chain) d.coref_chains.push_back({{0, 2, 4}, {1, 0, 1}});
  return d;
}

}  // namespace

TEST_CASE("shipped people lexicon") {
  CHECK(people().size() >= 100);
  for (const char* w : {"mother", "sister", "boss", "aunt", "friend"}) CHECK(people().contains(w));
  CHECK_FALSE(people().contains("car"));
}

TEST_CASE("people lexicon rejects bad entries") {
  CHECK_THROWS_AS(PeopleLexicon(std::set<std::string>{}), std::invalid_argument);
  CHECK_THROWS_AS(PeopleLexicon(std::set<std::string>{"Mother"}), std::invalid_argument);
  CHECK_THROWS_AS(PeopleLexicon(std::set<std::string>{"step mother"}), std::invalid_argument);
  testing::TempDir dir("people");
  {
    std::ofstream(dir.path() / "bad.txt") << "# comment\nmother\nstep mother\n";
  }
  CHECK_THROWS_AS(PeopleLexicon::load(dir.path() / "bad.txt"), DataError);
  CHECK_THROWS_AS(PeopleLexicon::load(dir.path() / "absent.txt"), MissingArtifact);
}

TEST_CASE("seed lists") {
  for (const char* w : {"i", "me", "my", "mine", "myself", "we", "us", "our", "ours", "ourselves"})
    CHECK(is_first_person_seed(w));
  for (const char* w : {"he", "him", "his", "she", "her", "hers", "they", "them", "their", "theirs", "himself",
                        "herself", "themselves"})
    CHECK(is_third_person_seed(w));
  CHECK(is_second_person("you"));
  CHECK_FALSE(is_first_person_seed("you"));
  CHECK_FALSE(is_third_person_seed("you"));
}

TEST_CASE("hand trace: my sister with she chain") {
  const auto p = build_persona_sets(sister_doc(true), people());
  CHECK(p.protagonist == std::set<MentionRef>{{0, 0}, {0, 2}});
  CHECK(p.antagonist == std::set<MentionRef>{{0, 3}, {1, 0}});
  CHECK(p.provenance.at({0, 3}) == Provenance::coref);
  CHECK(p.provenance.at({1, 0}) == Provenance::seed);
  CHECK(p.side_of({0, 1}) == std::nullopt);
}

TEST_CASE("people noun without a chain defaults to antagonist") {
  const auto p = build_persona_sets(sister_doc(false), people());
  CHECK(p.antagonist.contains({0, 3}));
  CHECK(p.provenance.at({0, 3}) == Provenance::people_noun);
}

TEST_CASE("empty and pronoun-free documents") {
  AnnotatedDoc empty;
  auto p = build_persona_sets(empty, people());
  CHECK(p.protagonist.empty());
  CHECK(p.antagonist.empty());
  AnnotatedDoc d;
  d.sentences.push_back({{tok("Rain", "rain", Pos::NOUN, 1, "nsubj"), tok("fell", "fall", Pos::VERB, kRoot, "ROOT")}});
  p = build_persona_sets(d, people());
  CHECK(p.protagonist.empty());
  CHECK(p.antagonist.empty());
}

TEST_CASE("second person is not a persona") {
  AnnotatedDoc d;
  d.sentences.push_back({{tok("You", "you", Pos::PRON, 1, "nsubj"), tok("know", "know", Pos::VERB, kRoot, "ROOT")}});
  const auto p = build_persona_sets(d, people());
  CHECK_FALSE(p.contains({0, 0}));
}

TEST_CASE("worked example personas") {
  const auto doc = testing::worked_example_doc();
  const auto p = build_persona_sets(doc, people());
  // My mother did not give it to him. She called me a terrible aunt.
  CHECK(p.protagonist.contains({1, 2}));  // me
  CHECK(p.protagonist.contains({1, 5}));  // aunt
  CHECK(p.antagonist.contains({0, 1}));   // mother
  CHECK(p.antagonist.contains({0, 7}));   // him
  CHECK(p.antagonist.contains({1, 0}));   // she
  const auto reps = coref_representatives(doc);
  CHECK(reps.at({1, 0}) == MentionRef{0, 1});
}

TEST_CASE("conflicting chain goes to the protagonist") {
  AnnotatedDoc d;
  d.sentences.push_back({{tok("I", "I", Pos::PRON, 1, "nsubj"), tok("saw", "see", Pos::VERB, kRoot, "ROOT"),
                          tok("him", "he", Pos::PRON, 1, "dobj")}});
  d.coref_chains.push_back({{0, 0, 1}, {0, 2, 3}});
  const auto p = build_persona_sets(d, people());
  CHECK(p.protagonist.contains({0, 0}));
  CHECK(p.protagonist.contains({0, 2}));
  CHECK(p.antagonist.empty());
}

TEST_CASE("span head reduction") {
  const auto doc = sister_doc(true);
  CHECK(span_head(doc.sentences[0], {0, 2, 4}) == 3);
  CHECK(span_head(doc.sentences[0], {0, 0, 4}) == 1);
}

TEST_CASE("persona properties on random documents") {
  Rng rng(17);
  for (int trial = 0; trial < 400; ++trial) {
    AnnotatedDoc doc = testing::random_doc(rng);
    CAPTURE(trial);
    const auto p = build_persona_sets(doc, people());
    for (const auto& m : p.protagonist) CHECK_FALSE(p.antagonist.contains(m));
    for (int s = 0; s < static_cast<int>(doc.sentences.size()); ++s) {
      for (int t = 0; t < static_cast<int>(doc.sentences[s].tokens.size()); ++t) {
        if (is_first_person_seed(to_lower(doc.token(s, t).lemma))) CHECK(p.protagonist.contains({s, t}));
      }
    }
    AnnotatedDoc stripped = doc;
    stripped.coref_chains.clear();
    const auto q = build_persona_sets(stripped, people());
    for (const auto& m : q.protagonist) CHECK(p.contains(m));
    for (const auto& m : q.antagonist) CHECK(p.contains(m));
    CHECK(q.protagonist.size() + q.antagonist.size() <= p.protagonist.size() + p.antagonist.size());
  }
}
