#include <regex>

#include "blame/extraction.hpp"
#include "blame/text.hpp"

namespace blame {
namespace {

struct Piece {
  std::string text;
  bool marker = false;
  Gender gender = Gender::unknown;
  std::optional<int> age;
};

std::optional<int> checked_age(const std::string& digits) {
  if (digits.empty() || digits.size() > 2) return std::nullopt;
  const int a = std::stoi(digits);
  if (a < kMinExtractAge || a > kMaxExtractAge) return std::nullopt;
  return a;
}

// "[25f]", "(f25)", "(25 m)", "[f]", "25F", "m30".
bool parse_marker(const std::string& tok, Piece& p) {
  static const std::regex bracketed(R"(^[\[(]\s*(\d{1,3})?\s*[/,]?\s*([mf])\s*[/,]?\s*(\d{1,3})?\s*[\])]$)");
  static const std::regex bare_age_first(R"(^(\d{1,3})([mf])$)");
  static const std::regex bare_gender_first(R"(^([mf])(\d{1,3})$)");
  std::smatch m;
  std::string digits;
  char g = 0;
  if (std::regex_match(tok, m, bracketed)) {
    if (m[1].matched && m[3].matched) return false;
    digits = m[1].matched ? m[1].str() : m[3].str();
    g = m[2].str()[0];
  } else if (std::regex_match(tok, m, bare_age_first) && checked_age(m[1].str())) {
    digits = m[1].str();
    g = m[2].str()[0];
  } else if (std::regex_match(tok, m, bare_gender_first) && checked_age(m[2].str())) {
    digits = m[2].str();
    g = m[1].str()[0];
  } else {
    return false;
  }
  p.marker = true;
  p.gender = g == 'f' ? Gender::female : Gender::male;
  p.age = checked_age(digits);
  return true;
}

bool is_author_word(const std::string& w) { return w == "i" || w == "me" || w == "my" || w == "myself"; }

}  // namespace

Demographics extract_demographics(std::string_view raw_text) {
  std::string text = to_lower(raw_text);
  for (std::size_t pos; (pos = text.find("\xE2\x80\x99")) != std::string::npos;) text.replace(pos, 3, "'");

  Demographics out;
  bool author_set = false;
  auto set_author = [&](Gender g, std::optional<int> age) {
    if (author_set) return;
    author_set = true;
    out.author_gender = g;
    out.author_age = age;
  };
  auto add_other = [&](const std::string& entity, Gender g, std::optional<int> age) {
    for (const auto& o : out.others)
      if (o.entity == entity) return;
    out.others.push_back({entity, g, age});
  };

  // 1. Bracketed / compact age-gender markers adjacent to an entity word.
  static const std::regex piece_re(R"(\[[^\]\[]{1,10}\]|\([^()]{1,10}\)|[a-z0-9']+)");
  std::vector<Piece> pieces;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), piece_re); it != std::sregex_iterator(); ++it) {
    Piece p;
    p.text = it->str();
    if (!parse_marker(p.text, p)) {
      if (p.text.front() == '[' || p.text.front() == '(') continue;
    }
    pieces.push_back(std::move(p));
  }
  constexpr int kWindow = 2;
  for (int i = 0; i < static_cast<int>(pieces.size()); ++i) {
    if (!pieces[i].marker) continue;
    const Piece* entity = nullptr;
    for (int d = 1; d <= kWindow && !entity; ++d) {
      if (i - d >= 0 && !pieces[i - d].marker) entity = &pieces[i - d];
    }
    for (int d = 1; d <= kWindow && !entity; ++d) {
      if (i + d < static_cast<int>(pieces.size()) && !pieces[i + d].marker) entity = &pieces[i + d];
    }
    if (!entity) continue;
    if (is_author_word(entity->text)) {
      set_author(pieces[i].gender, pieces[i].age);
    } else {
      add_other(entity->text, pieces[i].gender, pieces[i].age);
    }
  }

  // 2. Self-declaration.
  static const std::regex self_gender(R"(\bi(?:\s+am|'m)?(?:\s+an?)?\s+((?:fe)?male)\b)");
  static const std::regex self_age(
      R"(\bi(?:\s+am|'m)\s+(\d{2})(?:\s*(?:years?\s+old|yo|y/o))?(?=\s*[,.;:!?)]|\s+and\b|\s*$))");
  std::smatch m;
  if (!author_set && std::regex_search(text, m, self_gender)) {
    std::optional<int> age;
    std::smatch am;
    if (std::regex_search(text, am, self_age)) age = checked_age(am[1].str());
    set_author(m[1].str() == "female" ? Gender::female : Gender::male, age);
  }

  // 3. Gendered nouns.
  static const std::regex gendered(R"(\b(boy|father|son|girl|mother|daughter)\b)");
  static const std::regex self_frame(R"(\bi(?:\s+am|'m)\s+(?:an?\s+|the\s+|your\s+|his\s+|her\s+|their\s+)?$)");
  for (auto it = std::sregex_iterator(text.begin(), text.end(), gendered); it != std::sregex_iterator(); ++it) {
    const std::string w = (*it)[1].str();
    const Gender g = (w == "boy" || w == "father" || w == "son") ? Gender::male : Gender::female;
    const std::string before = text.substr(0, static_cast<std::size_t>(it->position()));
    if (std::regex_search(before, self_frame)) {
      set_author(g, std::nullopt);
    } else {
      add_other(w, g, std::nullopt);
    }
  }
  return out;
}

}  // namespace blame
