#include "blame/features.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "blame/error.hpp"
#include "blame/report.hpp"
#include "blame/text.hpp"

namespace blame {
namespace {

struct LexiconBlock {
  const char* lexicon;
  const char* prefix;  // feature-name prefix, may be empty
};

// Verb-keyed lexicons are averaged over SVO tuples only.
constexpr LexiconBlock kVerbLexicons[] = {{"connotation_frames", "cf_"}, {"power_agency", ""}};
// Word-keyed lexicons are averaged over SVO verbs and over ANP adjectives.
constexpr LexiconBlock kWordLexicons[] = {{"emfd", "emfd_"}, {"vad", "vad_"}, {"emotion", "emotion_"}};

bool has_alnum(std::string_view s) {
  for (unsigned char c : s)
    if (std::isalnum(c) || c >= 0x80) return true;
  return false;
}

std::string bare_verb(const SvoTuple& t) {
  if (t.negated && t.verb_lemma.starts_with("not ")) return t.verb_lemma.substr(4);
  return t.verb_lemma;
}

std::optional<std::span<const double>> lookup_token(const Lexicon& lex, const Token& t) {
  if (auto v = lex.lookup(t.lemma)) return v;
  return lex.lookup(t.text);
}

}  // namespace

std::string_view side_prefix(Side side) { return side == Side::protagonist ? "prot" : "ant"; }

const std::vector<std::string>& psycholinguistic_feature_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (Side side : {Side::protagonist, Side::antagonist}) {
      const std::string p = std::string(side_prefix(side)) + "_";
      out.push_back(p + "agent_ratio");
      out.push_back(p + "patient_ratio");
      out.push_back(p + "negation_rate");
      for (const auto& b : kVerbLexicons) {
        for (const auto& d : builtin_schema(b.lexicon).dimensions) out.push_back(p + b.prefix + d);
      }
      for (const char* construct : {"_svo", "_anp"}) {
        for (const auto& b : kWordLexicons) {
          for (const auto& d : builtin_schema(b.lexicon).dimensions) out.push_back(p + b.prefix + d + construct);
        }
      }
    }
    return out;
  }();
  return names;
}

const std::vector<std::string>& linguistic_feature_names() {
  static const std::vector<std::string> names = {
      "subjectivity",       "hedge",        "modal",
      "pron_first",         "pron_second",  "pron_third",
      "sentiment_compound", "sentiment_positive", "sentiment_neutral",
      "sentiment_negative"};
  return names;
}

NamedScores score_psycholinguistic(std::span<const SvoTuple> svo, std::span<const AnpPair> anp,
                                   const RoleCounts& roles, const LexiconRegistry& registry) {
  registry.require_complete();
  NamedScores out;
  for (Side side : {Side::protagonist, Side::antagonist}) {
    const std::string p = std::string(side_prefix(side)) + "_";
    std::vector<std::string> verbs;
    std::vector<std::string> adjectives;
    int negated = 0;
    for (const auto& t : svo) {
      if (t.side != side) continue;
      verbs.push_back(bare_verb(t));
      negated += t.negated ? 1 : 0;
    }
    for (const auto& a : anp)
      if (a.side == side) adjectives.push_back(a.adjective_lemma);

    const SideRoles& r = roles.of(side);
    out.emplace_back(p + "agent_ratio", r.agent_ratio());
    out.emplace_back(p + "patient_ratio", r.patient_ratio());
    out.emplace_back(p + "negation_rate", verbs.empty() ? 0.0 : double(negated) / verbs.size());

    auto mean_scores = [&](const Lexicon& lex, const std::vector<std::string>& words, const std::string& prefix,
                           const char* suffix) {
      std::vector<double> sums(lex.dimensions().size(), 0.0);
      for (const auto& w : words) {
        if (auto v = lex.lookup(w)) {
          for (std::size_t d = 0; d < sums.size(); ++d) sums[d] += (*v)[d];
        }
      }
      for (std::size_t d = 0; d < sums.size(); ++d) {
        out.emplace_back(p + prefix + lex.dimensions()[d] + suffix, words.empty() ? 0.0 : sums[d] / words.size());
      }
    };
    for (const auto& b : kVerbLexicons) mean_scores(registry.get(b.lexicon), verbs, b.prefix, "");
    for (const auto& b : kWordLexicons) mean_scores(registry.get(b.lexicon), verbs, b.prefix, "_svo");
    for (const auto& b : kWordLexicons) mean_scores(registry.get(b.lexicon), adjectives, b.prefix, "_anp");
  }
  return out;
}

std::vector<std::vector<std::string>> doc_lemmas(const AnnotatedDoc& doc) {
  std::vector<std::vector<std::string>> out;
  for (const auto& s : doc.sentences) {
    std::vector<std::string> lemmas;
    for (const auto& t : s.tokens) {
      if (has_alnum(t.text)) lemmas.push_back(to_lower(t.lemma.empty() ? t.text : t.lemma));
    }
    out.push_back(std::move(lemmas));
  }
  return out;
}

NamedScores score_linguistic(const AnnotatedDoc& doc, const LexiconRegistry& registry) {
  registry.require_complete();
  const Lexicon& subj = registry.get("subjectivity");
  const Lexicon& hedge = registry.get("hedge");
  const Lexicon& modal = registry.get("modal");

  double words = 0, subjectivity = 0, hedges = 0, modals = 0;
  double first = 0, second = 0, third = 0;
  for (const auto& s : doc.sentences) {
    for (const auto& t : s.tokens) {
      if (!has_alnum(t.text)) continue;
      words += 1;
      if (auto v = lookup_token(subj, t)) subjectivity += (*v)[0];
      if (lookup_token(hedge, t)) hedges += 1;
      if (lookup_token(modal, t)) modals += 1;
      const std::string w = to_lower(t.text);
      if (is_first_person_seed(w)) first += 1;
      else if (is_second_person(w)) second += 1;
      else if (is_third_person_seed(w)) third += 1;
    }
  }
  const auto lemmas = doc_lemmas(doc);
  const Sentiment sent = sentiment_compound(lemmas, registry.get("sentiment"));

  NamedScores out;
  out.emplace_back("subjectivity", words > 0 ? subjectivity / words : 0.0);
  out.emplace_back("hedge", words > 0 ? hedges / words : 0.0);
  out.emplace_back("modal", words > 0 ? modals / words : 0.0);
  out.emplace_back("pron_first", first);
  out.emplace_back("pron_second", second);
  out.emplace_back("pron_third", third);
  out.emplace_back("sentiment_compound", sent.compound);
  out.emplace_back("sentiment_positive", sent.category == SentimentCategory::positive ? 1.0 : 0.0);
  out.emplace_back("sentiment_neutral", sent.category == SentimentCategory::neutral ? 1.0 : 0.0);
  out.emplace_back("sentiment_negative", sent.category == SentimentCategory::negative ? 1.0 : 0.0);
  return out;
}

// ---- schema ------------------------------------------------------------------------

std::string_view to_string(FeatureGroup g) {
  switch (g) {
    case FeatureGroup::contextual: return "contextual";
    case FeatureGroup::psycholinguistic: return "psycholinguistic";
    case FeatureGroup::linguistic: return "linguistic";
  }
  return "contextual";
}

FeatureGroup parse_feature_group(std::string_view s) {
  if (s == "contextual") return FeatureGroup::contextual;
  if (s == "psycholinguistic") return FeatureGroup::psycholinguistic;
  if (s == "linguistic") return FeatureGroup::linguistic;
  throw std::invalid_argument("unknown feature category: " + std::string(s));
}

std::string FeatureSchema::hash() const {
  std::uint64_t h = fnv1a64("");
  for (std::size_t i = 0; i < names.size(); ++i) {
    h = fnv1a64(names[i], h);
    h = fnv1a64("\t", h);
    h = fnv1a64(to_string(groups[i]), h);
    h = fnv1a64("\n", h);
  }
  return hex64(h);
}

std::vector<std::size_t> FeatureSchema::columns_of(FeatureGroup g) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < groups.size(); ++i)
    if (groups[i] == g) out.push_back(i);
  return out;
}

std::string tfidf_feature_name(std::string_view term) { return "tfidf:" + std::string(term); }

FeatureSchema build_schema(std::span<const std::string> topic_names, const TfidfModel& tfidf, FeatureToggles toggles) {
  FeatureSchema s;
  auto add = [&](const std::string& n, FeatureGroup g) {
    s.names.push_back(n);
    s.groups.push_back(g);
  };
  if (toggles.contextual) {
    for (const auto& t : topic_names) add(t, FeatureGroup::contextual);
    for (const auto& t : tfidf.terms) add(tfidf_feature_name(t), FeatureGroup::contextual);
  }
  if (toggles.psycholinguistic) {
    for (const auto& n : psycholinguistic_feature_names()) add(n, FeatureGroup::psycholinguistic);
  }
  if (toggles.linguistic) {
    for (const auto& n : linguistic_feature_names()) add(n, FeatureGroup::linguistic);
  }
  return s;
}

FeatureVector assemble_features(const FeatureSchema& schema, std::span<const NamedScores> blocks) {
  std::unordered_map<std::string_view, std::size_t> index;
  index.reserve(schema.size());
  for (std::size_t i = 0; i < schema.size(); ++i) index.emplace(schema.names[i], i);
  FeatureVector v;
  v.schema_hash = schema.hash();
  v.values.assign(schema.size(), 0.0);
  for (const auto& block : blocks) {
    for (const auto& [name, value] : block) {
      auto it = index.find(name);
      if (it == index.end()) throw DataError("feature not in schema: " + name);
      if (!std::isfinite(value)) throw DataError("non-finite value for feature " + name);
      v.values[it->second] = value;
    }
  }
  return v;
}

void check_schema(const FeatureSchema& schema, const FeatureVector& v) {
  if (v.schema_hash != schema.hash() || v.values.size() != schema.size()) {
    throw DataError("feature schema mismatch: vector " + v.schema_hash + " vs schema " + schema.hash());
  }
}

// ---- files ---------------------------------------------------------------------------

void write_schema(const std::filesystem::path& path, const FeatureSchema& schema, std::string_view provenance) {
  std::ostringstream os;
  os << "# schema_hash=" << schema.hash() << ' ' << provenance << '\n';
  os << "name\tgroup\n";
  for (std::size_t i = 0; i < schema.size(); ++i) os << schema.names[i] << '\t' << to_string(schema.groups[i]) << '\n';
  write_file_atomic(path, os.str());
}

FeatureSchema read_schema(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  FeatureSchema s;
  std::string line;
  std::string declared;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (auto p = line.find("schema_hash="); p != std::string::npos) declared = line.substr(p + 12, 16);
      continue;
    }
    if (!header) {
      header = true;
      continue;
    }
    const auto cells = split_tab(line);
    if (cells.size() != 2) throw DataError(path.string() + ": bad schema row");
    s.names.push_back(cells[0]);
    try {
      s.groups.push_back(parse_feature_group(cells[1]));
    } catch (const std::invalid_argument& e) {
      throw DataError(path.string() + ": " + e.what());
    }
  }
  if (!declared.empty() && declared != s.hash()) throw DataError(path.string() + ": schema hash mismatch");
  return s;
}

void write_feature_matrix(const std::filesystem::path& path, const FeatureMatrix& m, std::string_view provenance) {
  std::ostringstream os;
  os << "# schema_hash=" << m.schema.hash() << ' ' << provenance << '\n';
  os << "id";
  for (const auto& n : m.schema.names) os << '\t' << n;
  os << '\n';
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    os << m.ids[r];
    for (double v : m.rows[r]) os << '\t' << format_double(v);
    os << '\n';
  }
  write_file_atomic(path, os.str());
}

FeatureMatrix read_feature_matrix(const std::filesystem::path& path, const FeatureSchema& schema) {
  std::istringstream in(read_file(path));
  FeatureMatrix m;
  m.schema = schema;
  std::string line;
  bool header = false;
  const std::string want = schema.hash();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto p = line.find("schema_hash=");
      if (p != std::string::npos && line.substr(p + 12, 16) != want) {
        throw DataError(path.string() + ": schema hash " + line.substr(p + 12, 16) + " does not match " + want);
      }
      continue;
    }
    const auto cells = split_tab(line);
    if (!header) {
      header = true;
      if (cells.size() != schema.size() + 1) throw DataError(path.string() + ": header width mismatch");
      for (std::size_t i = 0; i < schema.size(); ++i) {
        if (cells[i + 1] != schema.names[i]) throw DataError(path.string() + ": unexpected column " + cells[i + 1]);
      }
      continue;
    }
    if (cells.size() != schema.size() + 1) throw DataError(path.string() + ": row width mismatch");
    m.ids.push_back(cells[0]);
    std::vector<double> row(schema.size());
    for (std::size_t i = 0; i < schema.size(); ++i) {
      const auto& c = cells[i + 1];
      auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), row[i]);
      if (ec != std::errc() || !std::isfinite(row[i])) {
        throw DataError(path.string() + ": bad value in column " + schema.names[i]);
      }
    }
    m.rows.push_back(std::move(row));
  }
  return m;
}

}  // namespace blame
