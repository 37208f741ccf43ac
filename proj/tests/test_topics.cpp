#include <doctest.h>

#include <cmath>
#include <numeric>

#include "blame/error.hpp"
#include "blame/topics.hpp"
#include "support/topic_fixture.hpp"

using namespace blame;

namespace {

LdaOptions opts(int k, int iterations = 200, std::uint64_t seed = 1) {
  LdaOptions o;
  o.k = k;
  o.iterations = iterations;
  o.seed = seed;
  return o;
}

void check_rows_normalized(const TopicModel& m) {
  for (int k = 0; k < m.k; ++k) {
    const auto row = m.phi_row(k);
    double s = 0;
    for (double p : row) {
      CHECK(p >= 0.0);
      s += p;
    }
    CHECK(std::abs(s - 1.0) < 1e-9);
  }
  for (std::size_t d = 0; d < m.doc_count(); ++d) {
    const auto row = m.theta_row(d);
    double s = 0;
    for (double p : row) {
      CHECK(p >= 0.0);
      s += p;
    }
    CHECK(std::abs(s - 1.0) < 1e-9);
  }
}

}  // namespace

TEST_CASE("vocabulary building") {
  const std::vector<std::vector<std::string>> docs = {{"the", "dog", "barked", "aita", "42"}, {"dog", "cat"}};
  const auto v = build_vocabulary(docs);
  CHECK(v.words == std::vector<std::string>{"barked", "cat", "dog"});
  CHECK(v.docs[0] == WordIds{2, 0});  // token order is kept
  CHECK(v.docs[1] == WordIds{2, 1});
  const std::vector<std::string> held = {"cat", "unknown", "dog"};
  CHECK(map_to_vocabulary(v, held) == WordIds{1, 2});
  CHECK(is_stopword("the"));
  CHECK(is_stopword("wibta"));
  CHECK_FALSE(is_stopword("dog"));
}

TEST_CASE("gibbs sampler conserves token counts") {
  const auto c = testing::separable_corpus(10, 6, 15);
  GibbsSampler s(c.docs, c.vocab, 3, 50.0 / 3, 0.01, 9);
  const std::size_t tokens = 20 * 15;
  CHECK(s.token_count() == tokens);
  for (int it = 0; it < 25; ++it) {
    CHECK(s.doc_topic_total() == tokens);
    CHECK(s.word_topic_total() == tokens);
    CHECK(s.topic_total() == tokens);
    s.sweep();
  }
  check_rows_normalized(s.estimate());
}

TEST_CASE("lda_fit rows sum to one and fit is deterministic") {
  const auto c = testing::separable_corpus();
  const auto a = lda_fit(c.docs, c.vocab, opts(4));
  const auto b = lda_fit(c.docs, c.vocab, opts(4));
  check_rows_normalized(a);
  CHECK(a.phi == b.phi);
  CHECK(a.theta == b.theta);
  CHECK(a.alpha == doctest::Approx(50.0 / 4));
  const auto other = lda_fit(c.docs, c.vocab, opts(4, 200, 2));
  CHECK(other.phi != a.phi);
}

TEST_CASE("two separable groups give pure topics") {
  const auto c = testing::separable_corpus();
  const auto m = lda_fit(c.docs, c.vocab, opts(2, 300));
  CHECK(testing::top_word_purity(m, c.half) >= 0.9);
  const auto arg = argmax_topics(m);
  // Each group maps to a single topic and the two topics differ.
  for (std::size_t d = 0; d < c.docs.size(); ++d) CHECK(arg[d] == arg[c.group[d] == 0 ? 0 : c.docs.size() - 1]);
  CHECK(arg.front() != arg.back());
}

TEST_CASE("single topic degenerates to the smoothed unigram") {
  const auto c = testing::separable_corpus(5, 4, 10);
  const auto m = lda_fit(c.docs, c.vocab, opts(1, 5));
  for (double t : m.theta) CHECK(t == 1.0);
  std::vector<double> counts(c.vocab, 0.0);
  double n = 0;
  for (const auto& d : c.docs)
    for (int w : d) {
      counts[w] += 1;
      n += 1;
    }
  for (int w = 0; w < c.vocab; ++w)
    CHECK(m.phi[w] == doctest::Approx((counts[w] + 0.01) / (n + c.vocab * 0.01)).epsilon(1e-12));
}

TEST_CASE("lda_fit argument errors") {
  const auto c = testing::separable_corpus(2, 3, 5);
  CHECK_THROWS_AS(lda_fit(std::vector<WordIds>{}, 5, opts(2)), DataError);
  CHECK_THROWS_AS(lda_fit(std::vector<WordIds>{{}, {}}, 5, opts(2)), DataError);
  CHECK_THROWS_AS(lda_fit(c.docs, c.vocab, opts(0)), std::invalid_argument);
  CHECK_THROWS_AS(lda_fit(c.docs, c.vocab, opts(2, 0)), std::invalid_argument);
}

TEST_CASE("uniform model has perplexity V") {
  TopicModel m;
  m.k = 3;
  m.vocab_size = 7;
  m.alpha = 1.0;
  m.beta = 0.01;
  m.phi.assign(3 * 7, 1.0 / 7);
  m.theta.assign(3, 1.0 / 3);
  const std::vector<WordIds> held = {{0, 1, 2}, {6, 6, 5, 4}};
  CHECK(lda_perplexity(m, held) == doctest::Approx(7.0).epsilon(1e-12));
  // out-of-range ids are dropped; nothing left is an error
  CHECK_THROWS_AS(lda_perplexity(m, std::vector<WordIds>{{7, 9}}), DataError);
}

TEST_CASE("perplexity is at least one and favours the true topic count") {
  const auto c = testing::separable_corpus();
  const std::vector<WordIds> train(c.docs.begin() + 3, c.docs.end() - 3);
  const std::vector<WordIds> held = {c.docs[0], c.docs[1], c.docs[2], c.docs[c.docs.size() - 1]};
  const auto m1 = lda_fit(train, c.vocab, opts(1, 100));
  const auto m2 = lda_fit(train, c.vocab, opts(2, 100));
  const double p1 = lda_perplexity(m1, held), p2 = lda_perplexity(m2, held);
  CHECK(p1 >= 1.0);
  CHECK(p2 >= 1.0);
  CHECK(p2 < p1);
  CHECK(lda_perplexity(m2, held) == p2);

  // A one-word corpus is almost perfectly predicted.
  const std::vector<WordIds> same(5, WordIds(10, 0));
  const auto ms = lda_fit(same, 1, opts(1, 10));
  const double ps = lda_perplexity(ms, same);
  CHECK(ps >= 1.0);
  CHECK(ps < 1.0 + 1e-9);
}

TEST_CASE("select_k") {
  const auto c = testing::separable_corpus();
  const std::vector<int> one = {7};
  const auto r1 = select_k(c.docs, c.vocab, one, opts(0, 50));
  CHECK(r1.best_k == 7);

  const std::vector<int> grid = {2, 20};
  const auto r = select_k(c.docs, c.vocab, grid, opts(0, 200, 3));
  CHECK(r.best_k == 2);
  REQUIRE(r.perplexities.size() == 2);
  CHECK(r.perplexities[0].second < r.perplexities[1].second);
  const auto again = select_k(c.docs, c.vocab, grid, opts(0, 200, 3));
  CHECK(again.perplexities == r.perplexities);
  CHECK(default_k_grid() == std::vector<int>{30, 35, 40, 45, 50, 55});
}

TEST_CASE("merge_small_topics") {
  std::vector<int> a;
  for (int t = 0; t < 3; ++t)
    for (int i = 0; i < 200; ++i) a.push_back(t);
  auto m = merge_small_topics(a, 3);
  CHECK(m.assignment == a);
  CHECK(m.surviving == std::vector<int>{0, 1, 2});

  a.pop_back();  // topic 2 now has 199 docs
  m = merge_small_topics(a, 3);
  CHECK(m.surviving == std::vector<int>{0, 1});
  CHECK(m.assignment.back() == kOtherTopic);
  CHECK(m.doc_counts == std::vector<int>{200, 200, 199});

  const std::vector<int> planted = {0, 0, 0, 1, 2, 3, 3, 3};
  m = merge_small_topics(planted, 4, 3);
  CHECK(m.surviving == std::vector<int>{0, 3});
  CHECK(m.assignment[3] == kOtherTopic);
  CHECK(m.assignment[4] == kOtherTopic);
  CHECK(topic_feature_names(m) == std::vector<std::string>{"topic_0", "topic_3", "topic_other"});
  CHECK(topic_feature_name(kOtherTopic) == "topic_other");
}

TEST_CASE("top words and argmax ties") {
  TopicModel m;
  m.k = 2;
  m.vocab_size = 4;
  m.phi = {0.1, 0.4, 0.4, 0.1, 0.25, 0.25, 0.25, 0.25};
  m.theta = {0.5, 0.5, 0.2, 0.8};
  CHECK(top_words(m, 0, 2) == std::vector<int>{1, 2});
  CHECK(top_words(m, 1, 10) == std::vector<int>{0, 1, 2, 3});
  CHECK(argmax_topics(m) == std::vector<int>{0, 1});
}
