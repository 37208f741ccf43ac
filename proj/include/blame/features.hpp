#pragma once

// Per-document feature assembly: contextual (TF-IDF n-grams, topics),
// psycholinguistic (per persona side) and linguistic scores.

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "blame/corpus.hpp"
#include "blame/extraction.hpp"
#include "blame/lexicon.hpp"

namespace blame {

using NamedScores = std::vector<std::pair<std::string, double>>;

// ---- TF-IDF -----------------------------------------------------------------

inline constexpr int kDefaultMinDf = 5;

struct TfidfModel {
  std::vector<std::string> terms;                // column -> n-gram
  std::unordered_map<std::string, int> vocabulary;  // n-gram -> column
  std::vector<double> idf;
  std::size_t doc_count = 0;
};

using SparseVector = std::vector<std::pair<int, double>>;  // sorted by column

// Unigrams and bigrams ("a b") of a token list.
std::vector<std::string> ngrams(std::span<const std::string> tokens);

// idf(t) = ln((1 + N) / (1 + df(t))) + 1; n-grams with df < min_df dropped.
// Terms are ordered lexicographically. Throws DataError on an empty corpus.
TfidfModel tfidf_fit(std::span<const std::vector<std::string>> docs, int min_df = kDefaultMinDf);

// tf * idf, L2-normalized; unknown n-grams are ignored.
SparseVector tfidf_transform(const TfidfModel& model, std::span<const std::string> tokens);

// ---- sentiment --------------------------------------------------------------------

enum class SentimentCategory { positive, neutral, negative };
std::string_view to_string(SentimentCategory c);

struct Sentiment {
  double compound = 0.0;
  SentimentCategory category = SentimentCategory::neutral;
};

inline constexpr double kSentimentAlpha = 15.0;
inline constexpr double kBoostIncrement = 0.293;
inline constexpr int kNegationWindow = 3;

// Lexicon valences per sentence, sign-flipped when "not"/"no"/"never"
// occurs in the three preceding tokens and nudged by intensifiers/dampeners;
// each sentence sum s becomes s / sqrt(s^2 + 15) and the document score is
// the mean over sentences. >= 0.05 positive, <= -0.05 negative.
Sentiment sentiment_compound(std::span<const std::vector<std::string>> sentences, const Lexicon& valence);

// ---- psycholinguistic / linguistic ----------------------------------------------

std::string_view side_prefix(Side side);  // "prot" / "ant"

// Fixed, ordered feature names.
const std::vector<std::string>& psycholinguistic_feature_names();
const std::vector<std::string>& linguistic_feature_names();

// Per side: agent/patient ratios, negation rate, connotation-frame and
// power/agency means over SVO verbs, and eMFD/VAD/emotion means over SVO
// verbs and over ANP adjectives separately. Empty denominators give 0.
NamedScores score_psycholinguistic(std::span<const SvoTuple> svo, std::span<const AnpPair> anp,
                                   const RoleCounts& roles, const LexiconRegistry& registry);

// Subjectivity mean per word, hedge/modal rates per word, raw pronoun counts,
// sentiment compound plus one-hot category.
NamedScores score_linguistic(const AnnotatedDoc& doc, const LexiconRegistry& registry);

// Lowercased lemmas per sentence (alphanumeric tokens only).
std::vector<std::vector<std::string>> doc_lemmas(const AnnotatedDoc& doc);

// ---- schema and assembly ---------------------------------------------------------------

enum class FeatureGroup { contextual, psycholinguistic, linguistic };
std::string_view to_string(FeatureGroup g);
FeatureGroup parse_feature_group(std::string_view s);  // throws std::invalid_argument

struct FeatureSchema {
  std::vector<std::string> names;
  std::vector<FeatureGroup> groups;

  std::size_t size() const { return names.size(); }
  std::string hash() const;  // 16 hex digits over names and groups
  std::vector<std::size_t> columns_of(FeatureGroup g) const;
};

struct FeatureToggles {
  bool contextual = true;
  bool psycholinguistic = true;
  bool linguistic = true;
};

FeatureSchema build_schema(std::span<const std::string> topic_names, const TfidfModel& tfidf,
                           FeatureToggles toggles = {});

struct FeatureVector {
  std::string schema_hash;
  std::vector<double> values;
};

// Places every named score at its schema column; columns not mentioned stay
// 0 (a document without a topic gets an all-zero topic block). Unknown names
// and non-finite values throw DataError.
FeatureVector assemble_features(const FeatureSchema& schema, std::span<const NamedScores> blocks);

// Throws DataError when the vector was built under a different schema.
void check_schema(const FeatureSchema& schema, const FeatureVector& v);

std::string tfidf_feature_name(std::string_view term);

// ---- files ----------------------------------------------------------------------------

struct FeatureMatrix {
  FeatureSchema schema;
  std::vector<std::string> ids;
  std::vector<std::vector<double>> rows;
};

// `provenance` is appended to the header line ("config_hash=H seed=S").
void write_schema(const std::filesystem::path& path, const FeatureSchema& schema, std::string_view provenance);
FeatureSchema read_schema(const std::filesystem::path& path);
void write_feature_matrix(const std::filesystem::path& path, const FeatureMatrix& m, std::string_view provenance);
// Throws DataError when the matrix header disagrees with `schema`.
FeatureMatrix read_feature_matrix(const std::filesystem::path& path, const FeatureSchema& schema);

}  // namespace blame
