#pragma once

// LDA by collapsed Gibbs sampling, perplexity-based topic-count selection and
// merging of rarely assigned topics.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "blame/random.hpp"

namespace blame {

using WordIds = std::vector<int>;

struct Vocabulary {
  std::vector<std::string> words;
  std::vector<WordIds> docs;
};

// Sorted vocabulary over the given docs (tokens in `stopwords` and tokens
// without a letter are skipped).
Vocabulary build_vocabulary(std::span<const std::vector<std::string>> docs);
// Maps tokens through an existing vocabulary, dropping unknown ones.
WordIds map_to_vocabulary(const Vocabulary& vocab, std::span<const std::string> tokens);
bool is_stopword(std::string_view w);

struct LdaOptions {
  int k = 30;
  double alpha = 0.0;  // <= 0 means 50 / k
  double beta = 0.01;
  int iterations = 1000;
  int inference_iterations = 50;
  std::uint64_t seed = 0;
};

struct TopicModel {
  int k = 0;
  int vocab_size = 0;
  double alpha = 0.0;
  double beta = 0.0;
  std::uint64_t seed = 0;
  std::vector<double> phi;    // k x V, row-major
  std::vector<double> theta;  // D x k, row-major

  std::span<const double> phi_row(int topic) const {
    return {phi.data() + static_cast<std::size_t>(topic) * vocab_size, static_cast<std::size_t>(vocab_size)};
  }
  std::span<const double> theta_row(std::size_t doc) const {
    return {theta.data() + doc * k, static_cast<std::size_t>(k)};
  }
  std::size_t doc_count() const { return k == 0 ? 0 : theta.size() / k; }
};

// Token-topic assignment state. Exposed so tests can check count invariants
// between sweeps.
class GibbsSampler {
 public:
  GibbsSampler(std::span<const WordIds> docs, int vocab_size, int k, double alpha, double beta, std::uint64_t seed);

  void sweep();

  int k() const { return k_; }
  std::size_t token_count() const { return tokens_; }
  // Sums of the doc-topic, word-topic and topic-total count tables.
  std::size_t doc_topic_total() const;
  std::size_t word_topic_total() const;
  std::size_t topic_total() const;

  TopicModel estimate() const;

 private:
  std::span<const WordIds> docs_;
  int v_;
  int k_;
  double alpha_, beta_;
  std::uint64_t seed_;
  Rng rng_;
  std::size_t tokens_ = 0;
  std::vector<std::vector<int>> z_;
  std::vector<int> doc_topic_;   // D x K
  std::vector<int> word_topic_;  // V x K
  std::vector<int> topic_total_; // K
  std::vector<double> weights_;
};

// Throws DataError on an empty corpus, std::invalid_argument for k < 1 or
// iterations < 1.
TopicModel lda_fit(std::span<const WordIds> docs, int vocab_size, const LdaOptions& options);

// exp(-sum log p(w|d) / tokens), with held-out theta inferred by Gibbs
// sampling against the frozen phi. Theta is fit on the odd-position tokens of
// each document and only the even-position tokens are scored. Words outside [0, V) are dropped; throws
// DataError when nothing is left.
double lda_perplexity(const TopicModel& model, std::span<const WordIds> heldout, int iterations = 50);

struct SelectKResult {
  int best_k = 0;
  std::vector<std::pair<int, double>> perplexities;
};

// 90/10 internal split (seeded); the grid value with the lowest held-out
// perplexity wins, ties to the smaller k.
SelectKResult select_k(std::span<const WordIds> docs, int vocab_size, std::span<const int> grid,
                       const LdaOptions& options);

std::vector<int> default_k_grid();  // 30, 35, ..., 55

// Most probable topic per document (lowest index on ties).
std::vector<int> argmax_topics(const TopicModel& model);

inline constexpr int kOtherTopic = -1;
inline constexpr int kDefaultMinPosts = 200;

struct MergedTopics {
  std::vector<int> assignment;  // per doc: surviving topic id or kOtherTopic
  std::vector<int> surviving;   // ascending
  std::vector<int> doc_counts;  // per original topic
};

MergedTopics merge_small_topics(std::span<const int> assignments, int k, int min_posts = kDefaultMinPosts);

// Feature column names: "topic_<id>" per surviving topic, then "topic_other".
std::vector<std::string> topic_feature_names(const MergedTopics& merged);
std::string topic_feature_name(int topic);

// Indices of the n highest-probability words of a topic.
std::vector<int> top_words(const TopicModel& model, int topic, int n = 10);

}  // namespace blame
