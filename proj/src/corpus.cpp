#include "blame/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <json.hpp>
#include <stdexcept>

#include "blame/error.hpp"
#include "blame/random.hpp"
#include "blame/text.hpp"

namespace blame {

using nlohmann::json;

Flair parse_flair(std::string_view text) {
  const std::string t = to_lower(text);
  if (t == "yta" || t == "asshole" || t == "you're the asshole") return Flair::YTA;
  if (t == "nta" || t == "not the a-hole" || t == "not the asshole") return Flair::NTA;
  if (t == "esh" || t == "everyone sucks") return Flair::ESH;
  if (t == "nah" || t == "no a-holes here" || t == "no assholes here") return Flair::NAH;
  if (t == "info" || t == "not enough info") return Flair::INFO;
  return Flair::NONE;
}

std::string_view to_string(Flair flair) {
  switch (flair) {
    case Flair::YTA: return "YTA";
    case Flair::NTA: return "NTA";
    case Flair::ESH: return "ESH";
    case Flair::NAH: return "NAH";
    case Flair::INFO: return "INFO";
    case Flair::NONE: return "NONE";
  }
  return "NONE";
}

Pos parse_pos(std::string_view tag) {
  if (tag == "NOUN") return Pos::NOUN;
  if (tag == "PROPN") return Pos::PROPN;
  if (tag == "PRON") return Pos::PRON;
  if (tag == "VERB") return Pos::VERB;
  if (tag == "ADJ") return Pos::ADJ;
  if (tag == "ADV") return Pos::ADV;
  if (tag == "DET") return Pos::DET;
  if (tag == "ADP") return Pos::ADP;
  return Pos::other;
}

std::string_view to_string(Pos pos) {
  switch (pos) {
    case Pos::NOUN: return "NOUN";
    case Pos::PROPN: return "PROPN";
    case Pos::PRON: return "PRON";
    case Pos::VERB: return "VERB";
    case Pos::ADJ: return "ADJ";
    case Pos::ADV: return "ADV";
    case Pos::DET: return "DET";
    case Pos::ADP: return "ADP";
    case Pos::other: return "other";
  }
  return "other";
}

std::optional<int> map_label(Flair flair) {
  if (flair == Flair::YTA) return 1;
  if (flair == Flair::NTA) return 0;
  return std::nullopt;
}

// ---- interchange ------------------------------------------------------------

namespace {

int get_int(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) {
    throw DataError(std::string("field '") + key + "' missing or not an integer");
  }
  return j.at(key).get<int>();
}

std::string get_string(const json& j, const char* key, bool required = true) {
  if (!j.contains(key) || j.at(key).is_null()) {
    if (required) throw DataError(std::string("field '") + key + "' missing");
    return {};
  }
  if (!j.at(key).is_string()) throw DataError(std::string("field '") + key + "' not a string");
  return j.at(key).get<std::string>();
}

TokenSpan parse_span(const json& j, int default_sent) {
  TokenSpan s;
  s.sent = j.contains("sent") ? get_int(j, "sent") : default_sent;
  s.start = get_int(j, "start");
  s.end = get_int(j, "end");
  return s;
}

json span_json(const TokenSpan& s, bool with_sent) {
  json j = json::object();
  if (with_sent) j["sent"] = s.sent;
  j["start"] = s.start;
  j["end"] = s.end;
  return j;
}

}  // namespace

AnnotatedDoc parse_interchange_record(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw DataError("record is not a JSON object");

  AnnotatedDoc doc;
  doc.id = get_string(j, "id");
  if (doc.id.empty()) throw DataError("empty id");
  doc.title = get_string(j, "title", false);
  doc.body = get_string(j, "body", false);
  doc.flair = parse_flair(get_string(j, "flair", false));
  doc.comment_count = j.contains("comment_count") ? get_int(j, "comment_count") : 0;
  if (doc.comment_count < 0) throw DataError("negative comment_count");
  if (j.contains("comment_verdicts") && !j.at("comment_verdicts").is_null()) {
    for (const auto& v : j.at("comment_verdicts")) doc.comment_verdicts.push_back(parse_flair(v.get<std::string>()));
  }
  doc.label = map_label(doc.flair);

  if (j.contains("sentences")) {
    for (const auto& js : j.at("sentences")) {
      Sentence s;
      for (const auto& jt : js.at("tokens")) {
        Token t;
        t.text = get_string(jt, "text");
        t.lemma = get_string(jt, "lemma", false);
        if (t.lemma.empty()) t.lemma = t.text;
        t.pos = parse_pos(get_string(jt, "pos", false));
        const auto& h = jt.contains("head") ? jt.at("head") : json();
        if (h.is_null() || (h.is_string() && h.get<std::string>() == "ROOT")) {
          t.head = kRoot;
        } else if (h.is_number_integer()) {
          t.head = h.get<int>() < 0 ? kRoot : h.get<int>();
        } else {
          throw DataError("token head must be an index, -1, null or \"ROOT\"");
        }
        t.deprel = get_string(jt, "deprel", false);
        s.tokens.push_back(std::move(t));
      }
      doc.sentences.push_back(std::move(s));
    }
  }
  if (j.contains("coref")) {
    for (const auto& jc : j.at("coref")) {
      std::vector<TokenSpan> chain;
      for (const auto& js : jc) chain.push_back(parse_span(js, 0));
      doc.coref_chains.push_back(std::move(chain));
    }
  }
  if (j.contains("srl")) {
    for (const auto& jf : j.at("srl")) {
      SrlFrame f;
      f.sent = get_int(jf, "sent");
      f.predicate = parse_span(jf.at("pred"), f.sent);
      if (jf.contains("args")) {
        for (const auto& [role, spans] : jf.at("args").items()) {
          std::vector<TokenSpan>* dst = role == "ARG0" ? &f.arg0 : role == "ARG1" ? &f.arg1 : nullptr;
          if (!dst) continue;
          for (const auto& js : spans) dst->push_back(parse_span(js, f.sent));
        }
      }
      doc.srl_frames.push_back(std::move(f));
    }
  }
  return doc;
}

std::string to_interchange_record(const AnnotatedDoc& doc) {
  json j;
  j["id"] = doc.id;
  j["title"] = doc.title;
  j["body"] = doc.body;
  j["flair"] = std::string(to_string(doc.flair));
  j["comment_count"] = doc.comment_count;
  if (!doc.comment_verdicts.empty()) {
    json v = json::array();
    for (auto f : doc.comment_verdicts) v.push_back(std::string(to_string(f)));
    j["comment_verdicts"] = v;
  }
  json sents = json::array();
  for (const auto& s : doc.sentences) {
    json toks = json::array();
    for (const auto& t : s.tokens) {
      toks.push_back({{"text", t.text},
                      {"lemma", t.lemma},
                      {"pos", std::string(to_string(t.pos))},
                      {"head", t.head},
                      {"deprel", t.deprel}});
    }
    sents.push_back({{"tokens", toks}});
  }
  j["sentences"] = sents;
  json coref = json::array();
  for (const auto& c : doc.coref_chains) {
    json chain = json::array();
    for (const auto& s : c) chain.push_back(span_json(s, true));
    coref.push_back(chain);
  }
  j["coref"] = coref;
  json srl = json::array();
  for (const auto& f : doc.srl_frames) {
    json a0 = json::array(), a1 = json::array();
    for (const auto& s : f.arg0) a0.push_back(span_json(s, false));
    for (const auto& s : f.arg1) a1.push_back(span_json(s, false));
    srl.push_back({{"sent", f.sent},
                   {"pred", span_json(f.predicate, false)},
                   {"args", {{"ARG0", a0}, {"ARG1", a1}}}});
  }
  j["srl"] = srl;
  return j.dump();
}

std::vector<std::string> validate(const AnnotatedDoc& doc) {
  std::vector<std::string> errors;
  const int nsent = static_cast<int>(doc.sentences.size());
  for (int si = 0; si < nsent; ++si) {
    const auto& toks = doc.sentences[si].tokens;
    const int n = static_cast<int>(toks.size());
    if (n == 0) {
      errors.push_back("sentence " + std::to_string(si) + ": no tokens");
      continue;
    }
    int roots = 0;
    bool range_ok = true;
    for (int ti = 0; ti < n; ++ti) {
      const int h = toks[ti].head;
      if (h == kRoot) {
        ++roots;
      } else if (h < 0 || h >= n || h == ti) {
        errors.push_back("sentence " + std::to_string(si) + " token " + std::to_string(ti) +
                         ": head out of range");
        range_ok = false;
      }
    }
    if (roots != 1) {
      errors.push_back("sentence " + std::to_string(si) + ": expected exactly one root, found " +
                       std::to_string(roots));
    }
    if (!range_ok) continue;
    for (int ti = 0; ti < n; ++ti) {
      int cur = ti;
      int steps = 0;
      while (cur != kRoot && steps <= n) {
        cur = toks[cur].head;
        ++steps;
      }
      if (cur != kRoot) {
        errors.push_back("sentence " + std::to_string(si) + ": head cycle through token " +
                         std::to_string(ti));
        break;
      }
    }
  }
  auto check_span = [&](const TokenSpan& s, const std::string& where) {
    if (s.sent < 0 || s.sent >= nsent) {
      errors.push_back(where + ": sentence index " + std::to_string(s.sent) + " out of range");
      return;
    }
    const int n = static_cast<int>(doc.sentences[s.sent].tokens.size());
    if (s.start < 0 || s.end > n || s.start >= s.end) {
      errors.push_back(where + ": span [" + std::to_string(s.start) + "," + std::to_string(s.end) +
                       ") out of range");
    }
  };
  for (std::size_t c = 0; c < doc.coref_chains.size(); ++c) {
    const auto& chain = doc.coref_chains[c];
    const std::string where = "coref chain " + std::to_string(c);
    if (chain.size() < 2) errors.push_back(where + ": fewer than 2 spans");
    for (const auto& s : chain) check_span(s, where);
  }
  for (std::size_t f = 0; f < doc.srl_frames.size(); ++f) {
    const auto& fr = doc.srl_frames[f];
    const std::string where = "srl frame " + std::to_string(f);
    if (fr.sent < 0 || fr.sent >= nsent) {
      errors.push_back(where + ": sentence index " + std::to_string(fr.sent) + " out of range");
    } else if (fr.predicate.sent != fr.sent) {
      errors.push_back(where + ": predicate is not in the frame sentence");
    }
    check_span(fr.predicate, where);
    for (const auto& s : fr.arg0) check_span(s, where + " ARG0");
    for (const auto& s : fr.arg1) check_span(s, where + " ARG1");
  }
  return errors;
}

std::vector<std::string> validate_interchange_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifact(path.string());
  std::vector<std::string> errors;
  std::string line;
  int lineno = 0;
  std::vector<std::string> seen_ids;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const std::string prefix = "line " + std::to_string(lineno) + ": ";
    try {
      const AnnotatedDoc doc = parse_interchange_record(line);
      for (auto& e : validate(doc)) errors.push_back(prefix + e);
      seen_ids.push_back(doc.id);
    } catch (const std::exception& e) {
      errors.push_back(prefix + e.what());
    }
  }
  std::sort(seen_ids.begin(), seen_ids.end());
  for (std::size_t i = 1; i < seen_ids.size(); ++i) {
    if (seen_ids[i] == seen_ids[i - 1]) errors.push_back("duplicate id " + seen_ids[i]);
  }
  return errors;
}

std::vector<AnnotatedDoc> read_interchange(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifact(path.string());
  std::vector<AnnotatedDoc> docs;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    try {
      AnnotatedDoc doc = parse_interchange_record(line);
      if (auto errs = validate(doc); !errs.empty()) throw DataError(errs.front());
      docs.push_back(std::move(doc));
    } catch (const std::exception& e) {
      throw DataError(path.string() + " line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return docs;
}

// ---- raw dump -------------------------------------------------------------------

bool is_deleted_body(std::string_view body) { return body == "[deleted]" || body == "[removed]"; }

RawPost parse_raw_post(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("invalid JSON: ") + e.what());
  }
  RawPost p;
  p.id = get_string(j, "id");
  if (p.id.empty()) throw DataError("empty id");
  p.title = get_string(j, "title", false);
  p.body = get_string(j, "selftext", false);
  p.flair = parse_flair(get_string(j, "link_flair_text", false));
  p.comment_count = j.contains("num_comments") ? get_int(j, "num_comments") : 0;
  if (p.comment_count < 0) throw DataError("negative num_comments");
  if (j.contains("created_utc") && j.at("created_utc").is_number()) {
    p.created_at = static_cast<std::int64_t>(j.at("created_utc").get<double>());
  }
  if (j.contains("comment_verdicts") && j.at("comment_verdicts").is_array()) {
    for (const auto& v : j.at("comment_verdicts")) p.comment_verdicts.push_back(parse_flair(v.get<std::string>()));
  }
  return p;
}

RawDump read_raw_dump(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingArtifact(path.string());
  RawDump dump;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    RawPost p;
    try {
      p = parse_raw_post(line);
    } catch (const std::exception& e) {
      throw DataError(path.string() + " line " + std::to_string(lineno) + ": " + e.what());
    }
    if (is_deleted_body(p.body)) {
      ++dump.skipped_deleted;
      continue;
    }
    dump.posts.push_back(std::move(p));
  }
  return dump;
}

// ---- eligibility ---------------------------------------------------------------

bool filter_eligible(const PostMeta& meta, ExtractionCounts counts) {
  if (meta.flair == Flair::NONE) return false;
  if (meta.comment_count < kMinComments) return false;
  if (counts.svo < kMinSvo || counts.anp < kMinAnp) return false;
  if (!meta.comment_verdicts.empty()) {
    const auto agree = std::count(meta.comment_verdicts.begin(), meta.comment_verdicts.end(), meta.flair);
    if (2 * static_cast<std::size_t>(agree) <= meta.comment_verdicts.size()) return false;
  }
  return true;
}

// ---- split --------------------------------------------------------------------------

Fraction parse_fraction(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || s.empty()) {
      throw std::invalid_argument("bad fraction: " + std::string(text));
    }
    return v;
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return {parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1))};
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto whole = text.substr(0, dot);
    const auto frac = text.substr(dot + 1);
    if (frac.size() > 15) throw std::invalid_argument("too many decimals: " + std::string(text));
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const std::int64_t w = whole.empty() ? 0 : parse_int(whole);
    const std::int64_t f = frac.empty() ? 0 : parse_int(frac);
    return {w * den + f, den};
  }
  return {parse_int(text), 1};
}

void check_split_spec(const SplitSpec& spec) {
  for (const Fraction& f : {spec.train, spec.dev, spec.test}) {
    if (f.den <= 0 || f.num <= 0) throw std::invalid_argument("split fractions must be positive");
  }
  // a/b + c/d + e/f == 1, in 128-bit to avoid overflow.
  using i128 = __int128;
  const i128 num = i128(spec.train.num) * spec.dev.den * spec.test.den +
                   i128(spec.dev.num) * spec.train.den * spec.test.den +
                   i128(spec.test.num) * spec.train.den * spec.dev.den;
  const i128 den = i128(spec.train.den) * spec.dev.den * spec.test.den;
  if (num != den) throw std::invalid_argument("split fractions must sum to exactly 1");
}

SplitSizes split_sizes(std::size_t n, const SplitSpec& spec) {
  check_split_spec(spec);
  if (n < 3) throw DataError("corpus too small to split");
  using i128 = __int128;
  SplitSizes s;
  s.train = static_cast<std::size_t>(i128(n) * spec.train.num / spec.train.den);
  const std::size_t rest = n - s.train;
  // dev share of the remainder: p/q = dev / (dev + test), rounded half up.
  const i128 p = i128(spec.dev.num) * spec.test.den;
  const i128 q = p + i128(spec.test.num) * spec.dev.den;
  s.dev = static_cast<std::size_t>((2 * i128(rest) * p + q) / (2 * q));
  s.test = rest - s.dev;
  return s;
}

SplitIndices split_indices(std::size_t n, const SplitSpec& spec) {
  const SplitSizes sizes = split_sizes(n, spec);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(spec.seed);
  rng.shuffle(std::span<std::size_t>(order));
  SplitIndices out;
  out.train.assign(order.begin(), order.begin() + sizes.train);
  out.dev.assign(order.begin() + sizes.train, order.begin() + sizes.train + sizes.dev);
  out.test.assign(order.begin() + sizes.train + sizes.dev, order.end());
  return out;
}

}  // namespace blame
