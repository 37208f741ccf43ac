#include "blame/topics.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "blame/error.hpp"
#include "blame/kernels.hpp"

namespace blame {
namespace {

const std::set<std::string, std::less<>>& stopwords() {
  static const std::set<std::string, std::less<>> s = {
      "a", "about", "after", "again", "all", "also", "am", "an", "and", "any", "are", "as", "at", "be",
      "because", "been", "before", "being", "but", "by", "can", "could", "did", "do", "does", "doing",
      "down", "during", "each", "even", "few", "for", "from", "get", "got", "had", "has", "have", "having",
      "he", "her", "here", "hers", "herself", "him", "himself", "his", "how", "i", "if", "in", "into", "is",
      "it", "its", "itself", "just", "like", "me", "more", "most", "my", "myself", "no", "nor", "not", "now",
      "of", "off", "on", "once", "one", "only", "or", "other", "our", "ours", "ourselves", "out", "over",
      "own", "really", "said", "same", "say", "she", "should", "so", "some", "still", "such", "than",
      "that", "the", "their", "theirs", "them", "themselves", "then", "there", "these", "they", "thing",
      "this", "those", "through", "to", "too", "under", "until", "up", "us", "very", "was", "we", "were",
      "what", "when", "where", "which", "while", "who", "whom", "why", "will", "with", "would", "you",
      "your", "yours", "yourself", "yourselves", "aita", "wibta"};
  return s;
}

bool has_letter(std::string_view w) {
  for (unsigned char c : w)
    if (std::isalpha(c)) return true;
  return false;
}

int sample(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double u = rng.uniform() * total;
  double acc = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    acc += weights[k];
    if (u < acc) return static_cast<int>(k);
  }
  return static_cast<int>(weights.size()) - 1;
}

constexpr std::uint64_t kInferenceSalt = 0x9e3779b97f4a7c15ULL;

}  // namespace

bool is_stopword(std::string_view w) { return stopwords().find(w) != stopwords().end(); }

Vocabulary build_vocabulary(std::span<const std::vector<std::string>> docs) {
  std::set<std::string> words;
  for (const auto& d : docs)
    for (const auto& w : d)
      if (has_letter(w) && !is_stopword(w)) words.insert(w);
  Vocabulary v;
  v.words.assign(words.begin(), words.end());
  for (const auto& d : docs) v.docs.push_back(map_to_vocabulary(v, d));
  return v;
}

WordIds map_to_vocabulary(const Vocabulary& vocab, std::span<const std::string> tokens) {
  WordIds out;
  for (const auto& t : tokens) {
    auto it = std::lower_bound(vocab.words.begin(), vocab.words.end(), t);
    if (it != vocab.words.end() && *it == t) out.push_back(static_cast<int>(it - vocab.words.begin()));
  }
  return out;
}

// ---- sampler ------------------------------------------------------------------

GibbsSampler::GibbsSampler(std::span<const WordIds> docs, int vocab_size, int k, double alpha, double beta,
                           std::uint64_t seed)
    : docs_(docs), v_(vocab_size), k_(k), alpha_(alpha), beta_(beta), seed_(seed), rng_(seed) {
  if (k < 1) throw std::invalid_argument("topic count must be >= 1");
  if (vocab_size < 1) throw DataError("empty vocabulary");
  doc_topic_.assign(docs.size() * k, 0);
  word_topic_.assign(static_cast<std::size_t>(vocab_size) * k, 0);
  topic_total_.assign(k, 0);
  weights_.assign(k, 0.0);
  z_.resize(docs.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    z_[d].resize(docs[d].size());
    for (std::size_t i = 0; i < docs[d].size(); ++i) {
      const int w = docs[d][i];
      if (w < 0 || w >= vocab_size) throw DataError("word id out of range");
      const int t = static_cast<int>(rng_.below(static_cast<std::uint64_t>(k)));
      z_[d][i] = t;
      ++doc_topic_[d * k + t];
      ++word_topic_[static_cast<std::size_t>(w) * k + t];
      ++topic_total_[t];
      ++tokens_;
    }
  }
}

void GibbsSampler::sweep() {
  const double vbeta = v_ * beta_;
  const std::size_t k = static_cast<std::size_t>(k_);
  for (std::size_t d = 0; d < docs_.size(); ++d) {
    int* dt = doc_topic_.data() + d * k;
    for (std::size_t i = 0; i < docs_[d].size(); ++i) {
      const std::size_t w = static_cast<std::size_t>(docs_[d][i]);
      int* wt = word_topic_.data() + w * k;
      const int old = z_[d][i];
      --dt[old];
      --wt[old];
      --topic_total_[old];
      kernels::topic_weights({dt, k}, {wt, k}, topic_total_, alpha_, beta_, vbeta, weights_);
      const int t = sample(weights_, rng_);
      z_[d][i] = t;
      ++dt[t];
      ++wt[t];
      ++topic_total_[t];
    }
  }
}

std::size_t GibbsSampler::doc_topic_total() const {
  std::size_t s = 0;
  for (int c : doc_topic_) s += static_cast<std::size_t>(c);
  return s;
}

std::size_t GibbsSampler::word_topic_total() const {
  std::size_t s = 0;
  for (int c : word_topic_) s += static_cast<std::size_t>(c);
  return s;
}

std::size_t GibbsSampler::topic_total() const {
  std::size_t s = 0;
  for (int c : topic_total_) s += static_cast<std::size_t>(c);
  return s;
}

TopicModel GibbsSampler::estimate() const {
  TopicModel m;
  m.k = k_;
  m.vocab_size = v_;
  m.alpha = alpha_;
  m.beta = beta_;
  m.seed = seed_;
  m.phi.assign(static_cast<std::size_t>(k_) * v_, 0.0);
  m.theta.assign(docs_.size() * k_, 0.0);
  for (int t = 0; t < k_; ++t) {
    double* row = m.phi.data() + static_cast<std::size_t>(t) * v_;
    double sum = 0.0;
    for (int w = 0; w < v_; ++w) {
      row[w] = word_topic_[static_cast<std::size_t>(w) * k_ + t] + beta_;
      sum += row[w];
    }
    for (int w = 0; w < v_; ++w) row[w] /= sum;
  }
  for (std::size_t d = 0; d < docs_.size(); ++d) {
    double* row = m.theta.data() + d * k_;
    double sum = 0.0;
    for (int t = 0; t < k_; ++t) {
      row[t] = doc_topic_[d * k_ + t] + alpha_;
      sum += row[t];
    }
    for (int t = 0; t < k_; ++t) row[t] /= sum;
  }
  return m;
}

// ---- fitting and evaluation ------------------------------------------------------

TopicModel lda_fit(std::span<const WordIds> docs, int vocab_size, const LdaOptions& options) {
  std::size_t tokens = 0;
  for (const auto& d : docs) tokens += d.size();
  if (docs.empty() || tokens == 0) throw DataError("cannot fit LDA on an empty corpus");
  if (options.k < 1) throw std::invalid_argument("topic count must be >= 1");
  if (options.iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  const double alpha = options.alpha > 0.0 ? options.alpha : 50.0 / options.k;
  GibbsSampler sampler(docs, vocab_size, options.k, alpha, options.beta, options.seed);
  for (int it = 0; it < options.iterations; ++it) sampler.sweep();
  return sampler.estimate();
}

double lda_perplexity(const TopicModel& model, std::span<const WordIds> heldout, int iterations) {
  const int k = model.k;
  Rng rng(model.seed ^ kInferenceSalt);
  double log_lik = 0.0;
  std::size_t tokens = 0;
  std::vector<double> weights(k);
  for (const auto& raw : heldout) {
    // document completion: odd positions fit theta, even positions are scored
    WordIds fit, scored;
    for (int w : raw) {
      if (w < 0 || w >= model.vocab_size) continue;
      ((fit.size() + scored.size()) % 2 == 1 ? fit : scored).push_back(w);
    }
    if (scored.empty()) continue;
    std::vector<int> counts(k, 0);
    std::vector<int> z(fit.size());
    for (std::size_t i = 0; i < fit.size(); ++i) {
      z[i] = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
      ++counts[z[i]];
    }
    for (int it = 0; it < iterations && !fit.empty(); ++it) {
      for (std::size_t i = 0; i < fit.size(); ++i) {
        --counts[z[i]];
        for (int t = 0; t < k; ++t) weights[t] = (counts[t] + model.alpha) * model.phi_row(t)[fit[i]];
        z[i] = sample(weights, rng);
        ++counts[z[i]];
      }
    }
    const double denom = static_cast<double>(fit.size()) + k * model.alpha;
    for (int w : scored) {
      double p = 0.0;
      for (int t = 0; t < k; ++t) p += (counts[t] + model.alpha) / denom * model.phi_row(t)[w];
      log_lik += std::log(p);
    }
    tokens += scored.size();
  }
  if (tokens == 0) throw DataError("held-out corpus is empty after dropping unknown words");
  return std::exp(-log_lik / static_cast<double>(tokens));
}

SelectKResult select_k(std::span<const WordIds> docs, int vocab_size, std::span<const int> grid,
                       const LdaOptions& options) {
  if (grid.empty()) throw std::invalid_argument("topic grid is empty");
  SelectKResult out;
  if (grid.size() == 1) {
    out.best_k = grid.front();
    return out;
  }
  if (docs.size() < 2) throw DataError("need at least two documents to select a topic count");
  std::vector<std::size_t> order(docs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(options.seed);
  rng.shuffle(std::span<std::size_t>(order));
  const std::size_t n_held = std::max<std::size_t>(1, docs.size() / 10);
  std::vector<WordIds> train, held;
  for (std::size_t i = 0; i < order.size(); ++i) (i < n_held ? held : train).push_back(docs[order[i]]);

  double best = 0.0;
  for (int k : grid) {
    LdaOptions o = options;
    o.k = k;
    o.alpha = options.alpha > 0.0 ? options.alpha : 50.0 / k;
    const TopicModel m = lda_fit(train, vocab_size, o);
    const double p = lda_perplexity(m, held, options.inference_iterations);
    out.perplexities.emplace_back(k, p);
    if (out.best_k == 0 || p < best || (p == best && k < out.best_k)) {
      best = p;
      out.best_k = k;
    }
  }
  return out;
}

std::vector<int> default_k_grid() { return {30, 35, 40, 45, 50, 55}; }

std::vector<int> argmax_topics(const TopicModel& model) {
  std::vector<int> out;
  for (std::size_t d = 0; d < model.doc_count(); ++d) {
    const auto row = model.theta_row(d);
    out.push_back(static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin()));
  }
  return out;
}

MergedTopics merge_small_topics(std::span<const int> assignments, int k, int min_posts) {
  MergedTopics m;
  m.doc_counts.assign(k, 0);
  for (int a : assignments) {
    if (a < 0 || a >= k) throw std::out_of_range("topic assignment out of range");
    ++m.doc_counts[a];
  }
  std::vector<bool> keep(k);
  for (int t = 0; t < k; ++t) {
    keep[t] = m.doc_counts[t] >= min_posts;
    if (keep[t]) m.surviving.push_back(t);
  }
  for (int a : assignments) m.assignment.push_back(keep[a] ? a : kOtherTopic);
  return m;
}

std::string topic_feature_name(int topic) {
  return topic == kOtherTopic ? "topic_other" : "topic_" + std::to_string(topic);
}

std::vector<std::string> topic_feature_names(const MergedTopics& merged) {
  std::vector<std::string> out;
  for (int t : merged.surviving) out.push_back(topic_feature_name(t));
  out.push_back(topic_feature_name(kOtherTopic));
  return out;
}

std::vector<int> top_words(const TopicModel& model, int topic, int n) {
  const auto row = model.phi_row(topic);
  std::vector<int> idx(row.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  const auto take = std::min<std::size_t>(static_cast<std::size_t>(n), idx.size());
  std::partial_sort(idx.begin(), idx.begin() + take, idx.end(), [&](int a, int b) {
    return row[a] > row[b] || (row[a] == row[b] && a < b);
  });
  idx.resize(take);
  return idx;
}

}  // namespace blame
