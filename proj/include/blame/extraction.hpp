#pragma once

// Entity-centric constructs: subject-verb-object tuples, adjective-noun
// pairs, semantic-role counts, and self-reported demographics.

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blame/corpus.hpp"
#include "blame/persona.hpp"

namespace blame {

struct SvoTuple {
  MentionRef subject;
  MentionRef verb;
  std::string verb_lemma;  // "not " + lemma when negated
  bool negated = false;
  std::optional<MentionRef> object;
  Side side = Side::protagonist;
  bool via_coref = false;
};

struct AnpPair {
  MentionRef adjective;
  std::string adjective_lemma;
  MentionRef noun;
  Side side = Side::protagonist;
  bool via_coref = false;
};

struct SideRoles {
  int agent = 0;
  int patient = 0;
  double agent_ratio() const { return agent + patient == 0 ? 0.0 : double(agent) / (agent + patient); }
  double patient_ratio() const { return agent + patient == 0 ? 0.0 : double(patient) / (agent + patient); }
};

struct RoleCounts {
  SideRoles protagonist;
  SideRoles antagonist;
  const SideRoles& of(Side s) const { return s == Side::protagonist ? protagonist : antagonist; }
  SideRoles& of(Side s) { return s == Side::protagonist ? protagonist : antagonist; }
};

bool is_subject_relation(std::string_view deprel);  // nsubj nsubjpass csubj csubjpass xsubj
bool is_object_relation(std::string_view deprel);   // dobj iobj

// For every chain, maps each non-first mention (span head) to the chain's
// first mention in document order.
std::map<MentionRef, MentionRef> coref_representatives(const AnnotatedDoc& doc);

// Tuples for every VERB with a persona-member subject. A `neg` dependent
// marks the tuple negated. Mentions that corefer with an earlier mention on
// the same persona side also yield the tuple with that mention substituted
// (via_coref = true). Output is deduplicated and sorted.
std::vector<SvoTuple> extract_svo(const AnnotatedDoc& doc, const PersonaSets& personas);

// amod/acomp/ccomp adjectives attached to persona members (for acomp and
// ccomp, also to the persona subjects of the governing word).
std::vector<AnpPair> extract_anp(const AnnotatedDoc& doc, const PersonaSets& personas);

RoleCounts match_srl_roles(const AnnotatedDoc& doc, const PersonaSets& personas);

enum class Gender { male, female, unknown };
std::string_view to_string(Gender g);

struct PersonDemographics {
  std::string entity;  // lowercase entity word the marker attached to
  Gender gender = Gender::unknown;
  std::optional<int> age;
};

struct Demographics {
  Gender author_gender = Gender::unknown;
  std::optional<int> author_age;
  std::vector<PersonDemographics> others;
};

inline constexpr int kMinExtractAge = 10;
inline constexpr int kMaxExtractAge = 99;

// Works on raw (un-normalized) text. Priority: bracketed age/gender markers
// near an entity word, then self-declarations ("I am a female"), then
// gendered nouns (boy/father/son, girl/mother/daughter). Only male/female.
Demographics extract_demographics(std::string_view raw_text);

// Tab-separated dump, one construct per line.
void write_extraction_dump(std::ostream& out, const AnnotatedDoc& doc, const std::vector<SvoTuple>& svo,
                           const std::vector<AnpPair>& anp);

}  // namespace blame
