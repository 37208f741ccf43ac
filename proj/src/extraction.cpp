#include "blame/extraction.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <tuple>

#include "blame/text.hpp"

namespace blame {
namespace {

std::vector<std::vector<int>> children_of(const Sentence& s) {
  std::vector<std::vector<int>> kids(s.tokens.size());
  for (int i = 0; i < static_cast<int>(s.tokens.size()); ++i) {
    if (s.tokens[i].head != kRoot) kids[s.tokens[i].head].push_back(i);
  }
  return kids;
}

// The mention itself, plus its chain representative when that sits on the
// same persona side (or both are outside the persona sets).
std::vector<std::pair<MentionRef, bool>> alternatives(MentionRef m, const PersonaSets& personas,
                                                      const std::map<MentionRef, MentionRef>& reps) {
  std::vector<std::pair<MentionRef, bool>> out{{m, false}};
  if (auto it = reps.find(m); it != reps.end() && personas.side_of(it->second) == personas.side_of(m)) {
    out.emplace_back(it->second, true);
  }
  return out;
}

std::string lemma_of(const Token& t) { return to_lower(t.lemma.empty() ? t.text : t.lemma); }

}  // namespace

bool is_subject_relation(std::string_view d) {
  return d == "nsubj" || d == "nsubjpass" || d == "csubj" || d == "csubjpass" || d == "xsubj";
}

bool is_object_relation(std::string_view d) { return d == "dobj" || d == "iobj"; }

std::string_view to_string(Gender g) {
  switch (g) {
    case Gender::male: return "male";
    case Gender::female: return "female";
    case Gender::unknown: return "unknown";
  }
  return "unknown";
}

std::map<MentionRef, MentionRef> coref_representatives(const AnnotatedDoc& doc) {
  std::map<MentionRef, MentionRef> reps;
  for (const auto& chain : doc.coref_chains) {
    if (chain.empty()) continue;
    std::vector<MentionRef> heads;
    for (const auto& span : chain) heads.push_back({span.sent, span_head(doc.sentences[span.sent], span)});
    const MentionRef first = *std::min_element(heads.begin(), heads.end());
    for (const auto& h : heads) {
      if (h != first) reps.emplace(h, first);
    }
  }
  return reps;
}

std::vector<SvoTuple> extract_svo(const AnnotatedDoc& doc, const PersonaSets& personas) {
  const auto reps = coref_representatives(doc);
  std::map<std::tuple<MentionRef, MentionRef, std::optional<MentionRef>>, SvoTuple> found;

  for (int s = 0; s < static_cast<int>(doc.sentences.size()); ++s) {
    const Sentence& sent = doc.sentences[s];
    const auto kids = children_of(sent);
    for (int v = 0; v < static_cast<int>(sent.tokens.size()); ++v) {
      if (sent.tokens[v].pos != Pos::VERB) continue;
      std::vector<MentionRef> subjects;
      std::vector<std::optional<MentionRef>> objects;
      bool negated = false;
      for (int c : kids[v]) {
        const std::string& rel = sent.tokens[c].deprel;
        if (is_subject_relation(rel) && personas.contains({s, c})) subjects.push_back({s, c});
        if (is_object_relation(rel)) objects.emplace_back(MentionRef{s, c});
        if (rel == "neg") negated = true;
      }
      if (subjects.empty()) continue;
      if (objects.empty()) objects.emplace_back(std::nullopt);

      const std::string base = lemma_of(sent.tokens[v]);
      const std::string verb = negated ? "not " + base : base;
      for (const auto& subj : subjects) {
        for (const auto& obj : objects) {
          std::vector<std::pair<std::optional<MentionRef>, bool>> obj_alts{{obj, false}};
          if (obj) {
            obj_alts.clear();
            for (auto& [m, sub] : alternatives(*obj, personas, reps)) obj_alts.emplace_back(m, sub);
          }
          for (const auto& [sm, s_sub] : alternatives(subj, personas, reps)) {
            for (const auto& [om, o_sub] : obj_alts) {
              SvoTuple t;
              t.subject = sm;
              t.verb = {s, v};
              t.verb_lemma = verb;
              t.negated = negated;
              t.object = om;
              t.side = *personas.side_of(sm);
              t.via_coref = s_sub || o_sub;
              auto key = std::make_tuple(sm, t.verb, om);
              auto it = found.find(key);
              if (it == found.end()) {
                found.emplace(key, std::move(t));
              } else if (!t.via_coref) {
                it->second.via_coref = false;
              }
            }
          }
        }
      }
    }
  }
  std::vector<SvoTuple> out;
  out.reserve(found.size());
  for (auto& [k, t] : found) out.push_back(std::move(t));
  return out;
}

std::vector<AnpPair> extract_anp(const AnnotatedDoc& doc, const PersonaSets& personas) {
  const auto reps = coref_representatives(doc);
  std::map<std::pair<MentionRef, MentionRef>, AnpPair> found;

  for (int s = 0; s < static_cast<int>(doc.sentences.size()); ++s) {
    const Sentence& sent = doc.sentences[s];
    const auto kids = children_of(sent);
    for (int a = 0; a < static_cast<int>(sent.tokens.size()); ++a) {
      const Token& adj = sent.tokens[a];
      if (adj.pos != Pos::ADJ || adj.head == kRoot) continue;
      const bool amod = adj.deprel == "amod";
      const bool comp = adj.deprel == "acomp" || adj.deprel == "ccomp";
      if (!amod && !comp) continue;

      std::vector<MentionRef> nouns;
      const MentionRef governor{s, adj.head};
      if (personas.contains(governor)) {
        nouns.push_back(governor);
      } else if (comp) {
        for (int c : kids[adj.head]) {
          if (is_subject_relation(sent.tokens[c].deprel) && personas.contains({s, c})) nouns.push_back({s, c});
        }
      }
      for (const auto& n : nouns) {
        for (const auto& [nm, sub] : alternatives(n, personas, reps)) {
          AnpPair p;
          p.adjective = {s, a};
          p.adjective_lemma = lemma_of(adj);
          p.noun = nm;
          p.side = *personas.side_of(nm);
          p.via_coref = sub;
          auto key = std::make_pair(p.adjective, nm);
          auto it = found.find(key);
          if (it == found.end()) {
            found.emplace(key, std::move(p));
          } else if (!sub) {
            it->second.via_coref = false;
          }
        }
      }
    }
  }
  std::vector<AnpPair> out;
  out.reserve(found.size());
  for (auto& [k, p] : found) out.push_back(std::move(p));
  return out;
}

RoleCounts match_srl_roles(const AnnotatedDoc& doc, const PersonaSets& personas) {
  RoleCounts counts;
  for (const auto& frame : doc.srl_frames) {
    auto tally = [&](const std::vector<TokenSpan>& spans, bool agent) {
      for (const auto& span : spans) {
        const MentionRef head{span.sent, span_head(doc.sentences[span.sent], span)};
        if (auto side = personas.side_of(head)) {
          auto& r = counts.of(*side);
          (agent ? r.agent : r.patient) += 1;
        }
      }
    };
    tally(frame.arg0, true);
    tally(frame.arg1, false);
  }
  return counts;
}

void write_extraction_dump(std::ostream& out, const AnnotatedDoc& doc, const std::vector<SvoTuple>& svo,
                           const std::vector<AnpPair>& anp) {
  auto ref = [](MentionRef m) { return std::to_string(m.sent) + ":" + std::to_string(m.tok); };
  auto text = [&](MentionRef m) { return doc.token(m.sent, m.tok).text; };
  for (const auto& t : svo) {
    out << doc.id << "\tsvo\t" << ref(t.subject) << '\t' << text(t.subject) << '\t' << t.verb_lemma << '\t'
        << (t.negated ? 1 : 0) << '\t' << (t.object ? ref(*t.object) : "-") << '\t'
        << (t.object ? text(*t.object) : "-") << '\t' << to_string(t.side) << '\t' << (t.via_coref ? 1 : 0)
        << '\n';
  }
  for (const auto& p : anp) {
    out << doc.id << "\tanp\t" << p.adjective_lemma << '\t' << ref(p.noun) << '\t' << text(p.noun) << '\t'
        << to_string(p.side) << '\t' << (p.via_coref ? 1 : 0) << '\n';
  }
}

}  // namespace blame
