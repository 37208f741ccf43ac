#include <doctest.h>

#include <cmath>
#include <map>

#include "blame/error.hpp"
#include "blame/features.hpp"
#include "support/fixtures.hpp"
#include "support/random_docs.hpp"

using namespace blame;
using blame::testing::tok;

namespace {

const LexiconRegistry& reg() { return testing::shipped_lexicons(); }

std::map<std::string, double> as_map(const NamedScores& s) {
  std::map<std::string, double> m;
  for (const auto& [k, v] : s) m[k] = v;
  return m;
}

double norm(const SparseVector& v) {
  double s = 0;
  for (const auto& [c, x] : v) s += x * x;
  return std::sqrt(s);
}

SvoTuple svo(std::string verb, Side side, bool negated = false) {
  SvoTuple t;
  t.verb_lemma = negated ? "not " + verb : verb;
  t.negated = negated;
  t.side = side;
  return t;
}

AnpPair anp(std::string adj, Side side) {
  AnpPair p;
  p.adjective_lemma = std::move(adj);
  p.side = side;
  return p;
}

std::vector<std::string> words(std::initializer_list<const char*> w) { return {w.begin(), w.end()}; }

AnnotatedDoc sentence_doc(const std::vector<std::vector<std::string>>& sents) {
  AnnotatedDoc d;
  d.id = "d";
  for (const auto& s : sents) {
    Sentence out;
    for (const auto& w : s) out.tokens.push_back(tok(w, to_lower(w), Pos::other, kRoot, "dep"));
    d.sentences.push_back(out);
  }
  return d;
}

}  // namespace

TEST_CASE("ngrams") {
  CHECK(ngrams(words({"a", "b", "c"})) == words({"a", "b", "c", "a b", "b c"}));
  CHECK(ngrams(words({})).empty());
}

TEST_CASE("tfidf idf formula") {
  std::vector<std::vector<std::string>> same(4, words({"x"}));
  auto m = tfidf_fit(same, 1);
  REQUIRE(m.terms == words({"x"}));
  CHECK(m.idf[0] == doctest::Approx(1.0).epsilon(1e-15));

  std::vector<std::vector<std::string>> two = {words({"a", "b"}), words({"a"})};
  m = tfidf_fit(two, 1);
  CHECK(m.idf[m.vocabulary.at("b")] == doctest::Approx(std::log(3.0 / 2.0) + 1.0).epsilon(1e-15));
  CHECK(m.idf[m.vocabulary.at("a")] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::is_sorted(m.terms.begin(), m.terms.end()));
  CHECK_THROWS_AS(tfidf_fit(std::vector<std::vector<std::string>>{}, 1), DataError);
}

TEST_CASE("tfidf prunes rare n-grams") {
  std::vector<std::vector<std::string>> docs(1000, words({"common", "word"}));
  for (int i = 0; i < 4; ++i) docs[i] = words({"rare", "pair"});
  const auto m = tfidf_fit(docs);
  CHECK_FALSE(m.vocabulary.contains("rare pair"));
  CHECK(m.vocabulary.contains("common word"));
}

TEST_CASE("tfidf transform") {
  std::vector<std::vector<std::string>> docs = {words({"a", "b"}), words({"a", "b"}), words({"c"})};
  const auto m = tfidf_fit(docs, 1);
  CHECK(tfidf_transform(m, words({"zzz"})).empty());
  auto v = tfidf_transform(m, words({"c", "c", "c"}));
  REQUIRE(v.size() == 1);
  CHECK(v[0].second == doctest::Approx(1.0).epsilon(1e-15));
  v = tfidf_transform(m, words({"a", "zzz", "b"}));
  // a and b share tf and idf; "a zzz" and "zzz b" are unknown
  REQUIRE(v.size() == 2);
  CHECK(v[0].second == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(v[1].second == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("tfidf norm is 0 or 1") {
  Rng rng(8);
  const char* pool[] = {"a", "b", "c", "d", "e", "f", "g"};
  std::vector<std::vector<std::string>> docs;
  for (int i = 0; i < 40; ++i) {
    std::vector<std::string> d;
    for (std::size_t j = 0, n = rng.below(8); j < n; ++j) d.push_back(pool[rng.below(7)]);
    docs.push_back(d);
  }
  const auto m = tfidf_fit(docs, 2);
  for (const auto& d : docs) {
    const double n = norm(tfidf_transform(m, d));
    CHECK((n == 0.0 || std::abs(n - 1.0) < 1e-12));
  }
}

TEST_CASE("connotation scoring of a single betray tuple") {
  const std::vector<SvoTuple> one = {svo("betray", Side::antagonist)};
  const auto s = as_map(score_psycholinguistic(one, {}, RoleCounts{}, reg()));
  CHECK(s.at("ant_cf_perspective_agent") == -0.67);
  CHECK(s.at("ant_cf_perspective_theme") == 0.26);
  CHECK(s.at("ant_cf_value_agent") == 0.47);
  CHECK(s.at("ant_cf_value_theme") == 0.87);
  CHECK(s.at("ant_cf_effect_agent") == 0.067);
  CHECK(s.at("ant_cf_effect_theme") == -0.93);
  CHECK(s.at("ant_cf_mental_agent") == -0.03);
  CHECK(s.at("ant_cf_mental_theme") == -0.67);
  for (const auto& [k, v] : s)
    if (k.starts_with("prot_")) CHECK(v == 0.0);
}

TEST_CASE("negated verbs use the bare lemma and count toward the negation rate") {
  const std::vector<SvoTuple> t = {svo("betray", Side::protagonist, true), svo("yell", Side::protagonist)};
  const auto s = as_map(score_psycholinguistic(t, {}, RoleCounts{}, reg()));
  CHECK(s.at("prot_negation_rate") == 0.5);
  const double want = (-0.67 + reg().get("connotation_frames").lookup("yell").value()[0]) / 2;
  CHECK(s.at("prot_cf_perspective_agent") == doctest::Approx(want).epsilon(1e-15));
}

TEST_CASE("opposite agencies cancel") {
  const auto& pa = reg().get("power_agency");
  std::string pos_verb, neg_verb;
  for (const char* w : {"love", "help", "protect", "give", "yell", "betray", "ignore", "call", "steal", "suffer",
                        "cry", "lose", "need", "obey", "fear", "beg", "say", "go"}) {
    if (auto v = pa.lookup(w)) {
      const double a = (*v)[pa.dimension_index("agency")];
      if (a == 1.0 && pos_verb.empty()) pos_verb = w;
      if (a == -1.0 && neg_verb.empty()) neg_verb = w;
    }
  }
  REQUIRE_FALSE(pos_verb.empty());
  REQUIRE_FALSE(neg_verb.empty());
  const std::vector<SvoTuple> t = {svo(pos_verb, Side::antagonist), svo(neg_verb, Side::antagonist)};
  CHECK(as_map(score_psycholinguistic(t, {}, RoleCounts{}, reg())).at("ant_agency") == 0.0);
}

TEST_CASE("word lexicons are scored separately over verbs and adjectives") {
  const std::vector<SvoTuple> t = {svo("love", Side::protagonist)};
  const std::vector<AnpPair> a = {anp("terrible", Side::protagonist), anp("good", Side::protagonist)};
  const auto s = as_map(score_psycholinguistic(t, a, RoleCounts{}, reg()));
  CHECK(s.at("prot_emotion_joy_svo") == 1.0);
  CHECK(s.at("prot_emotion_joy_anp") == 0.5);  // good has joy, terrible does not
  CHECK(s.at("prot_vad_valence_anp") == doctest::Approx((0.16 + 0.872) / 2).epsilon(1e-15));
}

TEST_CASE("role ratios") {
  RoleCounts r;
  r.protagonist = {3, 1};
  const auto s = as_map(score_psycholinguistic({}, {}, r, reg()));
  CHECK(s.at("prot_agent_ratio") == 0.75);
  CHECK(s.at("prot_patient_ratio") == 0.25);
  CHECK(s.at("ant_agent_ratio") == 0.0);
}

TEST_CASE("psycholinguistic names match the fixed list") {
  const auto s = score_psycholinguistic({}, {}, RoleCounts{}, reg());
  REQUIRE(s.size() == psycholinguistic_feature_names().size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s[i].first == psycholinguistic_feature_names()[i]);
    CHECK(s[i].second == 0.0);
  }
}

TEST_CASE("psycholinguistic scores stay within lexicon bounds") {
  const char* verbs[] = {"betray", "yell", "love", "call", "give", "zzz"};
  const char* adjs[] = {"terrible", "good", "rude", "kind", "zzz"};
  for (const auto& name : {"connotation_frames", "power_agency", "emfd", "vad", "emotion"}) {
    const auto& lex = reg().get(name);
    for (std::size_t d = 0; d < lex.dimensions().size(); ++d) REQUIRE(lex.max_abs(d) <= 1.0);
  }
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<SvoTuple> t;
    std::vector<AnpPair> a;
    for (std::size_t i = 0, n = rng.below(6); i < n; ++i)
      t.push_back(svo(verbs[rng.below(6)], rng.below(2) ? Side::protagonist : Side::antagonist, rng.below(2)));
    for (std::size_t i = 0, n = rng.below(6); i < n; ++i)
      a.push_back(anp(adjs[rng.below(5)], rng.below(2) ? Side::protagonist : Side::antagonist));
    for (const auto& [k, v] : score_psycholinguistic(t, a, RoleCounts{}, reg())) CHECK(std::abs(v) <= 1.0);
  }
}

TEST_CASE("linguistic scores") {
  // 10 words, one strongsubj word ("terrible")
  auto d = sentence_doc({words({"the", "cat", "sat", "on", "a", "terrible", "mat", "all", "day", "long"})});
  auto s = as_map(score_linguistic(d, reg()));
  CHECK(s.at("subjectivity") == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(s.at("hedge") == 0.0);

  d = sentence_doc({words({"I", "told", "you", "she", "lied"})});
  s = as_map(score_linguistic(d, reg()));
  CHECK(s.at("pron_first") == 1.0);
  CHECK(s.at("pron_second") == 1.0);
  CHECK(s.at("pron_third") == 1.0);

  s = as_map(score_linguistic(AnnotatedDoc{}, reg()));
  for (const auto& [k, v] : s)
    if (k != "sentiment_neutral") CHECK(v == 0.0);
  CHECK(s.at("sentiment_neutral") == 1.0);
}

TEST_CASE("duplicating sentences leaves normalized linguistic scores unchanged") {
  Rng rng(12);
  const char* pool[] = {"I", "maybe", "terrible", "good", "not", "very", "she", "should", "the", "you", "love"};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::vector<std::string>> sents;
    for (std::size_t i = 0, n = 1 + rng.below(3); i < n; ++i) {
      std::vector<std::string> s;
      for (std::size_t j = 0, m = 1 + rng.below(8); j < m; ++j) s.push_back(pool[rng.below(std::size(pool))]);
      sents.push_back(s);
    }
    auto doubled = sents;
    doubled.insert(doubled.end(), sents.begin(), sents.end());
    const auto a = as_map(score_linguistic(sentence_doc(sents), reg()));
    const auto b = as_map(score_linguistic(sentence_doc(doubled), reg()));
    for (const char* k : {"subjectivity", "hedge", "modal", "sentiment_compound"})
      CHECK(b.at(k) == doctest::Approx(a.at(k)).epsilon(1e-12));
    CHECK(b.at("pron_first") == 2 * a.at("pron_first"));
  }
}

TEST_CASE("sentiment examples") {
  const auto& val = reg().get("sentiment");
  auto s = sentiment_compound(std::vector<std::vector<std::string>>{}, val);
  CHECK(s.compound == 0.0);
  CHECK(s.category == SentimentCategory::neutral);

  const double v = 1.9;
  s = sentiment_compound(std::vector<std::vector<std::string>>{words({"good"})}, val);
  CHECK(s.compound == doctest::Approx(v / std::sqrt(v * v + 15)).epsilon(1e-15));
  CHECK(s.category == SentimentCategory::positive);

  const auto neg = sentiment_compound(std::vector<std::vector<std::string>>{words({"not", "good"})}, val);
  CHECK(neg.compound < 0);
  CHECK(neg.compound == doctest::Approx(-s.compound).epsilon(1e-15));
  CHECK(neg.category == SentimentCategory::negative);

  const auto boosted = sentiment_compound(std::vector<std::vector<std::string>>{words({"very", "good"})}, val);
  CHECK(boosted.compound > s.compound);
}

TEST_CASE("sentiment stays in range with consistent categories") {
  const auto& val = reg().get("sentiment");
  const char* pool[] = {"good", "love", "terrible", "not", "never", "very", "slightly", "the", "no"};
  Rng rng(33);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::vector<std::string>> sents(1 + rng.below(4));
    for (auto& s : sents)
      for (std::size_t j = 0, m = rng.below(20); j < m; ++j) s.push_back(pool[rng.below(std::size(pool))]);
    const auto r = sentiment_compound(sents, val);
    CHECK(r.compound >= -1.0);
    CHECK(r.compound <= 1.0);
    if (r.compound >= 0.05) CHECK(r.category == SentimentCategory::positive);
    else if (r.compound <= -0.05) CHECK(r.category == SentimentCategory::negative);
    else CHECK(r.category == SentimentCategory::neutral);
  }
}

TEST_CASE("schema and assembly") {
  std::vector<std::vector<std::string>> docs(5, words({"a", "b"}));
  const auto tf = tfidf_fit(docs, 1);
  const std::vector<std::string> topics = {"topic_0", "topic_other"};
  const auto schema = build_schema(topics, tf);
  CHECK(schema.size() == 2 + 3 + psycholinguistic_feature_names().size() + linguistic_feature_names().size());
  CHECK(schema.names[2] == tfidf_feature_name("a"));
  CHECK(schema.columns_of(FeatureGroup::contextual).size() == 5);
  CHECK(schema.hash().size() == 16);

  const NamedScores topic_block = {{"topic_other", 1.0}};
  const auto psy = score_psycholinguistic({}, {}, RoleCounts{}, reg());
  const std::vector<NamedScores> blocks = {topic_block, psy};
  const auto v1 = assemble_features(schema, blocks);
  const auto v2 = assemble_features(schema, blocks);
  CHECK(v1.values == v2.values);
  CHECK(v1.values.size() == schema.size());
  CHECK(v1.values[0] == 0.0);
  CHECK(v1.values[1] == 1.0);
  CHECK_NOTHROW(check_schema(schema, v1));

  // No topic block at all: zeros, same length.
  const auto v3 = assemble_features(schema, std::vector<NamedScores>{psy});
  CHECK(v3.values.size() == schema.size());
  CHECK(v3.values[1] == 0.0);

  const std::vector<NamedScores> bad = {{{"nope", 1.0}}};
  CHECK_THROWS_AS(assemble_features(schema, bad), DataError);
  const std::vector<NamedScores> nan = {{{"topic_0", std::nan("")}}};
  CHECK_THROWS_AS(assemble_features(schema, nan), DataError);

  FeatureToggles no_ctx;
  no_ctx.contextual = false;
  const auto other = build_schema(topics, tf, no_ctx);
  CHECK(other.hash() != schema.hash());
  CHECK_THROWS_AS(check_schema(other, v1), DataError);
  CHECK(parse_feature_group("linguistic") == FeatureGroup::linguistic);
  CHECK_THROWS_AS(parse_feature_group("semantic"), std::invalid_argument);
}

TEST_CASE("schema and matrix files round trip") {
  testing::TempDir dir("feat");
  std::vector<std::vector<std::string>> docs(5, words({"a", "b"}));
  const auto schema = build_schema(std::vector<std::string>{"topic_other"}, tfidf_fit(docs, 1));
  write_schema(dir.path() / "schema.tsv", schema, "config_hash=abc seed=1");
  const auto back = read_schema(dir.path() / "schema.tsv");
  CHECK(back.names == schema.names);
  CHECK(back.groups == schema.groups);

  FeatureMatrix m;
  m.schema = schema;
  m.ids = {"d1", "d2"};
  m.rows = {std::vector<double>(schema.size(), 0.1), std::vector<double>(schema.size(), -1.0 / 3.0)};
  write_feature_matrix(dir.path() / "f.tsv", m, "config_hash=abc seed=1");
  const auto r = read_feature_matrix(dir.path() / "f.tsv", schema);
  CHECK(r.ids == m.ids);
  CHECK(r.rows == m.rows);

  FeatureToggles t;
  t.linguistic = false;
  const auto smaller = build_schema(std::vector<std::string>{"topic_other"}, tfidf_fit(docs, 1), t);
  CHECK_THROWS_AS(read_feature_matrix(dir.path() / "f.tsv", smaller), DataError);
}

TEST_CASE("doc_lemmas keeps alphanumeric tokens") {
  AnnotatedDoc d;
  d.sentences.push_back({{tok("She", "she", Pos::PRON, 1, "nsubj"), tok("ran", "run", Pos::VERB, kRoot, "ROOT"),
                          tok(".", ".", Pos::other, 1, "punct")}});
  const auto l = doc_lemmas(d);
  REQUIRE(l.size() == 1);
  CHECK(l[0] == words({"she", "run"}));
}
