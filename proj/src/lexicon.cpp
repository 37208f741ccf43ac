#include "blame/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "blame/error.hpp"
#include "blame/text.hpp"

namespace blame {
namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    std::string cell = line.substr(start, tab == std::string::npos ? std::string::npos : tab - start);
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(std::move(cell));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

LexiconSchema make_schema(std::string name, LexiconKind kind, std::vector<std::string> dims, ScoreRange range) {
  LexiconSchema s;
  s.name = std::move(name);
  s.kind = kind;
  s.ranges.assign(dims.size(), range);
  s.dimensions = std::move(dims);
  return s;
}

}  // namespace

Lexicon::Lexicon(LexiconSchema schema, std::unordered_map<std::string, std::vector<double>> entries,
                 int duplicates)
    : schema_(std::move(schema)), entries_(std::move(entries)), duplicates_(duplicates) {}

std::optional<std::span<const double>> Lexicon::lookup(std::string_view lemma) const {
  auto it = entries_.find(to_lower(lemma));
  if (it == entries_.end()) return std::nullopt;
  return std::span<const double>(it->second);
}

std::size_t Lexicon::dimension_index(std::string_view dim) const {
  const auto& d = schema_.dimensions;
  auto it = std::find(d.begin(), d.end(), dim);
  if (it == d.end()) throw std::out_of_range("lexicon " + schema_.name + " has no dimension " + std::string(dim));
  return static_cast<std::size_t>(it - d.begin());
}

double Lexicon::max_abs(std::size_t dim) const {
  const auto& r = schema_.ranges.at(dim);
  return std::max(std::abs(r.min), std::abs(r.max));
}

Lexicon load_lexicon(const std::filesystem::path& path, const LexiconSchema& schema) {
  std::ifstream in(path);
  if (!in) throw MissingArtifact(path.string());
  const std::string where = path.string();

  std::string line;
  std::vector<std::string> header;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    header = split_tabs(line);
    break;
  }
  if (header.empty()) throw DataError(where + ": empty lexicon file");
  if (to_lower(header[0]) != "lemma") throw DataError(where + ": first header column must be 'lemma'");

  // Column of each schema dimension; -1 means "word list" (implicit 1).
  std::vector<int> columns;
  const bool word_list = header.size() == 1 && schema.kind == LexiconKind::scalar;
  for (const auto& dim : schema.dimensions) {
    auto it = std::find(header.begin() + 1, header.end(), dim);
    if (it == header.end()) {
      if (word_list) {
        columns.push_back(-1);
        continue;
      }
      throw DataError(where + ": missing dimension column '" + dim + "'");
    }
    columns.push_back(static_cast<int>(it - header.begin()));
  }

  std::unordered_map<std::string, std::vector<double>> entries;
  int duplicates = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split_tabs(line);
    if (cells[0].empty()) continue;
    const std::string at = where + " line " + std::to_string(lineno);
    std::vector<double> scores;
    scores.reserve(columns.size());
    for (std::size_t d = 0; d < columns.size(); ++d) {
      double v = 1.0;
      if (columns[d] >= 0) {
        if (static_cast<std::size_t>(columns[d]) >= cells.size()) throw DataError(at + ": too few columns");
        const std::string& cell = cells[columns[d]];
        if (auto lab = schema.labels.find(cell); lab != schema.labels.end()) {
          v = lab->second;
        } else {
          auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
          if (ec != std::errc() || p != cell.data() + cell.size()) {
            throw DataError(at + ": bad value '" + cell + "' for " + schema.dimensions[d]);
          }
        }
      }
      const auto& r = schema.ranges[d];
      if (!std::isfinite(v) || v < r.min || v > r.max) {
        throw DataError(at + ": " + schema.dimensions[d] + " score " + cells[columns[d] < 0 ? 0 : columns[d]] +
                        " outside [" + std::to_string(r.min) + ", " + std::to_string(r.max) + "]");
      }
      scores.push_back(v);
    }
    auto [it, inserted] = entries.insert_or_assign(to_lower(cells[0]), std::move(scores));
    if (!inserted) ++duplicates;
  }
  if (entries.empty()) throw DataError(where + ": empty lexicon file");
  return Lexicon(schema, std::move(entries), duplicates);
}

const std::vector<std::string>& required_lexicons() {
  static const std::vector<std::string> names = {"connotation_frames", "power_agency", "emfd",
                                                 "vad",                "emotion",      "subjectivity",
                                                 "hedge",              "modal",        "sentiment"};
  return names;
}

const LexiconSchema& builtin_schema(std::string_view name) {
  static const std::map<std::string, LexiconSchema, std::less<>> schemas = [] {
    std::map<std::string, LexiconSchema, std::less<>> m;
    const ScoreRange signed_unit{-1.0, 1.0};
    const ScoreRange unit{0.0, 1.0};
    m["connotation_frames"] = make_schema(
        "connotation_frames", LexiconKind::per_dimension,
        {"perspective_agent", "perspective_theme", "value_agent", "value_theme", "effect_agent", "effect_theme",
         "mental_agent", "mental_theme"},
        signed_unit);
    m["power_agency"] = make_schema("power_agency", LexiconKind::per_dimension, {"power", "agency"}, signed_unit);
    m["emfd"] = make_schema("emfd", LexiconKind::per_dimension,
                            {"care", "harm", "fairness", "cheating", "loyalty", "betrayal", "authority",
                             "subversion", "sanctity", "degradation"},
                            signed_unit);
    m["vad"] = make_schema("vad", LexiconKind::per_dimension, {"valence", "arousal", "dominance"}, unit);
    m["emotion"] = make_schema(
        "emotion", LexiconKind::per_dimension,
        {"joy", "sadness", "anger", "fear", "trust", "disgust", "surprise", "anticipation"}, unit);
    auto subj = make_schema("subjectivity", LexiconKind::scalar, {"subjectivity"}, unit);
    subj.labels = {{"weaksubj", 0.5}, {"strongsubj", 1.0}, {"neutral", 0.0}};
    m["subjectivity"] = subj;
    m["hedge"] = make_schema("hedge", LexiconKind::scalar, {"score"}, unit);
    m["modal"] = make_schema("modal", LexiconKind::scalar, {"score"}, unit);
    m["sentiment"] = make_schema("sentiment", LexiconKind::scalar, {"valence"}, {-4.0, 4.0});
    return m;
  }();
  auto it = schemas.find(name);
  if (it == schemas.end()) throw std::out_of_range("no built-in schema for lexicon " + std::string(name));
  return it->second;
}

void LexiconRegistry::add(Lexicon lex) {
  const std::string name = lex.name();
  lexicons_.insert_or_assign(name, std::move(lex));
}

bool LexiconRegistry::has(std::string_view name) const { return lexicons_.find(name) != lexicons_.end(); }

const Lexicon& LexiconRegistry::get(std::string_view name) const {
  auto it = lexicons_.find(name);
  if (it == lexicons_.end()) throw DataError("lexicon not loaded: " + std::string(name));
  return it->second;
}

std::vector<std::string> LexiconRegistry::missing() const {
  std::vector<std::string> out;
  for (const auto& n : required_lexicons())
    if (!has(n)) out.push_back(n);
  return out;
}

void LexiconRegistry::require_complete() const {
  const auto miss = missing();
  if (miss.empty()) return;
  std::ostringstream os;
  os << "missing lexicons:";
  for (std::size_t i = 0; i < miss.size(); ++i) os << (i ? ", " : " ") << miss[i];
  throw DataError(os.str());
}

LexiconRegistry load_registry(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw MissingArtifact(dir.string());
  LexiconRegistry reg;
  for (const auto& name : required_lexicons()) {
    const auto path = dir / (name + ".tsv");
    if (std::filesystem::exists(path)) reg.add(load_lexicon(path, builtin_schema(name)));
  }
  reg.require_complete();
  return reg;
}

}  // namespace blame
