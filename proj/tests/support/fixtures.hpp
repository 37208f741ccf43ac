#pragma once

#include <cstdlib>
#include <filesystem>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "blame/corpus.hpp"
#include "blame/extraction.hpp"
#include "blame/lexicon.hpp"
#include "blame/persona.hpp"
#include "blame/text.hpp"

namespace blame::testing {

inline std::filesystem::path data_path(const std::string& rel) { return std::filesystem::path(BLAME_DATA_DIR) / rel; }
inline std::filesystem::path fixture_path(const std::string& rel) {
  return std::filesystem::path(BLAME_FIXTURE_DIR) / rel;
}

inline AnnotatedDoc worked_example_doc() { return read_interchange(fixture_path("worked_example.jsonl")).at(0); }

inline const PeopleLexicon& shipped_people() {
  static const PeopleLexicon p = PeopleLexicon::load(data_path("people.txt"));
  return p;
}

inline const LexiconRegistry& shipped_lexicons() {
  static const LexiconRegistry r = load_registry(data_path("lexicons"));
  return r;
}

using SvoText = std::tuple<std::string, std::string, std::string>;
using AnpText = std::pair<std::string, std::string>;

inline std::string word_at(const AnnotatedDoc& d, MentionRef m) { return to_lower(d.token(m.sent, m.tok).text); }

inline std::set<SvoText> svo_text(const AnnotatedDoc& d, const std::vector<SvoTuple>& v) {
  std::set<SvoText> out;
  for (const auto& t : v) out.emplace(word_at(d, t.subject), t.verb_lemma, t.object ? word_at(d, *t.object) : "-");
  return out;
}

inline std::set<AnpText> anp_text(const AnnotatedDoc& d, const std::vector<AnpPair>& v) {
  std::set<AnpText> out;
  for (const auto& p : v) out.emplace(p.adjective_lemma, word_at(d, p.noun));
  return out;
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("blamekit-" + tag + "-" + std::to_string(std::rand()) + "-" + std::to_string(counter()++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  static int& counter() {
    static int c = 0;
    return c;
  }
  std::filesystem::path path_;
};

}  // namespace blame::testing
