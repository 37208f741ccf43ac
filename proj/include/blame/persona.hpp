#pragma once

// Protagonist (author) and antagonist (others) mention sets.

#include <compare>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "blame/corpus.hpp"

namespace blame {

struct MentionRef {
  int sent = 0;
  int tok = 0;
  friend auto operator<=>(const MentionRef&, const MentionRef&) = default;
};

enum class Side { protagonist, antagonist };
std::string_view to_string(Side side);

enum class Provenance { seed, people_noun, coref };
std::string_view to_string(Provenance p);

struct PersonaSets {
  std::set<MentionRef> protagonist;
  std::set<MentionRef> antagonist;
  std::map<MentionRef, Provenance> provenance;

  std::optional<Side> side_of(MentionRef m) const;
  bool contains(MentionRef m) const { return side_of(m).has_value(); }
};

class PeopleLexicon {
 public:
  PeopleLexicon() = default;
  // Throws std::invalid_argument on an empty set or a non-lowercase / multi-token entry.
  explicit PeopleLexicon(std::set<std::string> words);

  // One lowercase lemma per line; '#' starts a comment.
  static PeopleLexicon load(const std::filesystem::path& path);

  bool contains(std::string_view lemma) const;
  std::size_t size() const { return words_.size(); }

 private:
  std::set<std::string, std::less<>> words_;
};

bool is_first_person_seed(std::string_view lower_word);
bool is_third_person_seed(std::string_view lower_word);
bool is_second_person(std::string_view lower_word);

// Syntactic head of a span: the token whose head lies outside the span
// (first such token on ties).
int span_head(const Sentence& sentence, const TokenSpan& span);

// Seed pronouns, people-noun candidates, then coreference propagation. A
// chain holding both first- and third-person seeds goes to the protagonist.
// People nouns never linked to a seed default to the antagonist.
PersonaSets build_persona_sets(const AnnotatedDoc& doc, const PeopleLexicon& people);

}  // namespace blame
