#pragma once

// Word-score resources behind one registry with uniform lookup semantics.
//
// File format: UTF-8, tab-separated, header row `lemma<TAB>dim1<TAB>...`,
// one row per lemma, '#' comment lines. A scalar lexicon whose file has only
// the `lemma` column is a word list: every entry scores 1.

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace blame {

enum class LexiconKind { scalar, per_dimension };

struct ScoreRange {
  double min = 0.0;
  double max = 1.0;
};

struct LexiconSchema {
  std::string name;
  LexiconKind kind = LexiconKind::scalar;
  std::vector<std::string> dimensions;
  std::vector<ScoreRange> ranges;  // one per dimension
  // Categorical cell values, e.g. weaksubj -> 0.5.
  std::map<std::string, double, std::less<>> labels;
};

class Lexicon {
 public:
  Lexicon() = default;
  Lexicon(LexiconSchema schema, std::unordered_map<std::string, std::vector<double>> entries,
          int duplicates = 0);

  const std::string& name() const { return schema_.name; }
  const LexiconSchema& schema() const { return schema_; }
  const std::vector<std::string>& dimensions() const { return schema_.dimensions; }
  std::size_t size() const { return entries_.size(); }
  int duplicate_count() const { return duplicates_; }

  // Exact, case-insensitive lemma match.
  std::optional<std::span<const double>> lookup(std::string_view lemma) const;
  std::size_t dimension_index(std::string_view dim) const;  // throws std::out_of_range

  // Largest |score| per dimension across the schema range.
  double max_abs(std::size_t dim) const;

 private:
  LexiconSchema schema_;
  std::unordered_map<std::string, std::vector<double>> entries_;
  int duplicates_ = 0;
};

// Throws DataError: empty file, missing dimension column (named), bad cell,
// or score outside the declared range. Duplicate lemmas: last wins, counted.
Lexicon load_lexicon(const std::filesystem::path& path, const LexiconSchema& schema);

// The nine resources the feature extractor needs.
const std::vector<std::string>& required_lexicons();
// Schema for a required lexicon name; throws std::out_of_range otherwise.
const LexiconSchema& builtin_schema(std::string_view name);

class LexiconRegistry {
 public:
  void add(Lexicon lex);
  bool has(std::string_view name) const;
  const Lexicon& get(std::string_view name) const;  // throws DataError when absent
  std::vector<std::string> missing() const;
  // Throws DataError listing every missing required lexicon.
  void require_complete() const;

 private:
  std::map<std::string, Lexicon, std::less<>> lexicons_;
};

// Loads `<dir>/<name>.tsv` for each required name that exists, then checks
// completeness.
LexiconRegistry load_registry(const std::filesystem::path& dir);

}  // namespace blame
