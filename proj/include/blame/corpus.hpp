#pragma once

// Documents, the annotation interchange format, eligibility filtering,
// verdict labels and the deterministic train/dev/test split.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace blame {

enum class Flair { YTA, NTA, ESH, NAH, INFO, NONE };

enum class Pos { NOUN, PROPN, PRON, VERB, ADJ, ADV, DET, ADP, other };

inline constexpr int kRoot = -1;

struct Token {
  std::string text;
  std::string lemma;
  Pos pos = Pos::other;
  int head = kRoot;  // index into the sentence, or kRoot
  std::string deprel;
};

struct Sentence {
  std::vector<Token> tokens;
};

// Half-open token range [start, end) inside sentence `sent`.
struct TokenSpan {
  int sent = 0;
  int start = 0;
  int end = 0;
  friend bool operator==(const TokenSpan&, const TokenSpan&) = default;
};

struct SrlFrame {
  int sent = 0;
  TokenSpan predicate;
  std::vector<TokenSpan> arg0;  // agent spans
  std::vector<TokenSpan> arg1;  // patient spans
};

struct PostMeta {
  Flair flair = Flair::NONE;
  int comment_count = 0;
  std::vector<Flair> comment_verdicts;  // empty when the dump has none
};

struct RawPost {
  std::string id;
  std::string title;
  std::string body;
  Flair flair = Flair::NONE;
  std::int64_t created_at = 0;  // UTC seconds
  int comment_count = 0;
  std::vector<Flair> comment_verdicts;

  PostMeta meta() const { return {flair, comment_count, comment_verdicts}; }
};

struct AnnotatedDoc {
  std::string id;
  std::string title;
  std::string body;
  Flair flair = Flair::NONE;
  int comment_count = 0;
  std::vector<Flair> comment_verdicts;
  std::optional<int> label;
  std::vector<Sentence> sentences;
  std::vector<std::vector<TokenSpan>> coref_chains;
  std::vector<SrlFrame> srl_frames;

  PostMeta meta() const { return {flair, comment_count, comment_verdicts}; }
  const Token& token(int sent, int tok) const { return sentences[sent].tokens[tok]; }
};

// Accepts the verdict codes (YTA, NTA, ...) and the forum's long-form flair
// texts ("Asshole", "Not the A-hole", ...). Anything else maps to NONE.
Flair parse_flair(std::string_view text);
std::string_view to_string(Flair flair);
Pos parse_pos(std::string_view tag);
std::string_view to_string(Pos pos);

// YTA -> 1, NTA -> 0, everything else has no label.
std::optional<int> map_label(Flair flair);

// ---- interchange format -------------------------------------------------

// Parses one JSON line. Roles other than ARG0/ARG1 are dropped. The label
// is derived from the flair. Throws DataError on malformed records.
AnnotatedDoc parse_interchange_record(std::string_view line);
std::string to_interchange_record(const AnnotatedDoc& doc);

// Structural invariants: one root per sentence, acyclic heads, spans in
// range, coref chains of length >= 2. Empty result means valid.
std::vector<std::string> validate(const AnnotatedDoc& doc);

// Parse + validate a whole file; errors are prefixed with "line N:". Lines
// starting with '#' are provenance headers and skipped by every reader.
std::vector<std::string> validate_interchange_file(const std::filesystem::path& path);

// Throws DataError naming the first bad line.
std::vector<AnnotatedDoc> read_interchange(const std::filesystem::path& path);

// ---- raw dump -------------------------------------------------------------

RawPost parse_raw_post(std::string_view line);
bool is_deleted_body(std::string_view body);

struct RawDump {
  std::vector<RawPost> posts;
  int skipped_deleted = 0;
};
RawDump read_raw_dump(const std::filesystem::path& path);

// ---- eligibility ----------------------------------------------------------

struct ExtractionCounts {
  int svo = 0;
  int anp = 0;
};

inline constexpr int kMinComments = 50;
inline constexpr int kMinSvo = 10;
inline constexpr int kMinAnp = 10;

// Flair present, >= 50 comments, >= 10 SVO tuples, >= 10 adjective-noun
// pairs, and (when per-comment verdicts exist) a strict majority agreeing
// with the flair.
bool filter_eligible(const PostMeta& meta, ExtractionCounts counts);

// ---- split ------------------------------------------------------------------

struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;
};

// Parses "0.8", "4/5" or "1" exactly.
Fraction parse_fraction(std::string_view text);

struct SplitSpec {
  Fraction train{8, 10};
  Fraction dev{1, 10};
  Fraction test{1, 10};
  std::uint64_t seed = 0;
};

// Throws std::invalid_argument unless all fractions are positive and sum to 1.
void check_split_spec(const SplitSpec& spec);

struct SplitSizes {
  std::size_t train = 0, dev = 0, test = 0;
};
SplitSizes split_sizes(std::size_t n, const SplitSpec& spec);

struct SplitIndices {
  std::vector<std::size_t> train, dev, test;
};

// Seeded shuffle, then train = floor(train_frac * N); the remainder goes to
// dev/test in proportion with ties to dev. Throws DataError for N < 3.
SplitIndices split_indices(std::size_t n, const SplitSpec& spec);

template <typename T>
struct Split {
  std::vector<T> train, dev, test;
};

template <typename T>
Split<T> split_corpus(std::span<const T> docs, const SplitSpec& spec) {
  const SplitIndices idx = split_indices(docs.size(), spec);
  Split<T> out;
  for (auto i : idx.train) out.train.push_back(docs[i]);
  for (auto i : idx.dev) out.dev.push_back(docs[i]);
  for (auto i : idx.test) out.test.push_back(docs[i]);
  return out;
}

}  // namespace blame
