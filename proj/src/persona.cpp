#include "blame/persona.hpp"

#include <array>
#include <fstream>
#include <stdexcept>

#include "blame/error.hpp"
#include "blame/text.hpp"

namespace blame {
namespace {

constexpr std::array<std::string_view, 10> kFirstPerson = {"i",  "me",  "my",   "mine", "myself",
                                                           "we", "us",  "our",  "ours", "ourselves"};
constexpr std::array<std::string_view, 13> kThirdPerson = {
    "he",   "him",    "his",    "she",     "her",     "hers",      "they",
    "them", "their",  "theirs", "himself", "herself", "themselves"};
constexpr std::array<std::string_view, 5> kSecondPerson = {"you", "your", "yours", "yourself", "yourselves"};

template <std::size_t N>
bool in(const std::array<std::string_view, N>& a, std::string_view w) {
  for (auto x : a)
    if (x == w) return true;
  return false;
}

std::optional<Side> seed_side(const Token& t) {
  const std::string text = to_lower(t.text);
  const std::string lemma = to_lower(t.lemma);
  if (is_first_person_seed(text) || is_first_person_seed(lemma)) return Side::protagonist;
  if (is_third_person_seed(text) || is_third_person_seed(lemma)) return Side::antagonist;
  return std::nullopt;
}

}  // namespace

std::string_view to_string(Side side) { return side == Side::protagonist ? "protagonist" : "antagonist"; }

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::seed: return "seed";
    case Provenance::people_noun: return "people_noun";
    case Provenance::coref: return "coref";
  }
  return "seed";
}

std::optional<Side> PersonaSets::side_of(MentionRef m) const {
  if (protagonist.contains(m)) return Side::protagonist;
  if (antagonist.contains(m)) return Side::antagonist;
  return std::nullopt;
}

bool is_first_person_seed(std::string_view w) { return in(kFirstPerson, w); }
bool is_third_person_seed(std::string_view w) { return in(kThirdPerson, w); }
bool is_second_person(std::string_view w) { return in(kSecondPerson, w); }

PeopleLexicon::PeopleLexicon(std::set<std::string> words) {
  if (words.empty()) throw std::invalid_argument("people lexicon is empty");
  for (auto& w : words) {
    if (w.empty() || w != to_lower(w) || w.find_first_of(" \t") != std::string::npos) {
      throw std::invalid_argument("people lexicon entry must be a lowercase single token: '" + w + "'");
    }
    words_.insert(w);
  }
}

PeopleLexicon PeopleLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifact(path.string());
  std::set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto parts = split_words(line);
    if (parts.empty()) continue;
    if (parts.size() > 1) throw DataError(path.string() + ": multi-token entry '" + line + "'");
    words.insert(parts.front());
  }
  try {
    return PeopleLexicon(std::move(words));
  } catch (const std::invalid_argument& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

bool PeopleLexicon::contains(std::string_view lemma) const { return words_.find(lemma) != words_.end(); }

int span_head(const Sentence& sentence, const TokenSpan& span) {
  for (int i = span.start; i < span.end; ++i) {
    const int h = sentence.tokens[i].head;
    if (h == kRoot || h < span.start || h >= span.end) return i;
  }
  return span.start;
}

PersonaSets build_persona_sets(const AnnotatedDoc& doc, const PeopleLexicon& people) {
  std::map<MentionRef, Side> seeds;
  std::set<MentionRef> candidates;
  for (int s = 0; s < static_cast<int>(doc.sentences.size()); ++s) {
    const auto& toks = doc.sentences[s].tokens;
    for (int t = 0; t < static_cast<int>(toks.size()); ++t) {
      if (auto side = seed_side(toks[t])) {
        seeds[{s, t}] = *side;
      } else if ((toks[t].pos == Pos::NOUN || toks[t].pos == Pos::PROPN) &&
                 (people.contains(to_lower(toks[t].lemma)) || people.contains(to_lower(toks[t].text)))) {
        candidates.insert({s, t});
      }
    }
  }

  // Side each chain propagates to, decided by the seeds among its span heads.
  std::map<MentionRef, Side> chain_target;
  for (const auto& chain : doc.coref_chains) {
    std::vector<MentionRef> heads;
    bool has_first = false, has_third = false;
    for (const auto& span : chain) {
      const MentionRef h{span.sent, span_head(doc.sentences[span.sent], span)};
      heads.push_back(h);
      if (auto it = seeds.find(h); it != seeds.end()) {
        (it->second == Side::protagonist ? has_first : has_third) = true;
      }
    }
    if (!has_first && !has_third) continue;
    const Side side = has_first ? Side::protagonist : Side::antagonist;
    for (const auto& h : heads) {
      auto [it, inserted] = chain_target.emplace(h, side);
      if (!inserted && side == Side::protagonist) it->second = Side::protagonist;
    }
  }

  PersonaSets out;
  auto place = [&](MentionRef m, Side side, Provenance p) {
    (side == Side::protagonist ? out.protagonist : out.antagonist).insert(m);
    out.provenance[m] = p;
  };
  for (const auto& [m, side] : seeds) {
    auto it = chain_target.find(m);
    const Side final_side = it != chain_target.end() ? it->second : side;
    place(m, final_side, final_side == side ? Provenance::seed : Provenance::coref);
  }
  for (const auto& [m, side] : chain_target) {
    if (!seeds.contains(m)) place(m, side, Provenance::coref);
  }
  for (const auto& m : candidates) {
    if (!out.provenance.contains(m)) place(m, Side::antagonist, Provenance::people_noun);
  }
  return out;
}

}  // namespace blame
