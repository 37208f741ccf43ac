#include "blame/text.hpp"

#include <cctype>
#include <string>
#include <unordered_map>

namespace blame {
namespace {

// Ambiguous forms ('s, 'd) take their most frequent reading in narratives.
const std::vector<std::pair<std::string, std::string>> kContractions = {
    {"ain't", "am not"},        {"aren't", "are not"},       {"can't", "can not"},
    {"can't've", "can not have"}, {"cannot", "can not"},     {"could've", "could have"},
    {"couldn't", "could not"},  {"couldn't've", "could not have"}, {"didn't", "did not"},
    {"doesn't", "does not"},    {"don't", "do not"},         {"hadn't", "had not"},
    {"hadn't've", "had not have"}, {"hasn't", "has not"},    {"haven't", "have not"},
    {"he'd", "he would"},       {"he'd've", "he would have"}, {"he'll", "he will"},
    {"he's", "he is"},          {"here's", "here is"},       {"how'd", "how did"},
    {"how'll", "how will"},     {"how's", "how is"},         {"i'd", "i would"},
    {"i'd've", "i would have"}, {"i'll", "i will"},          {"i'm", "i am"},
    {"i've", "i have"},         {"isn't", "is not"},         {"it'd", "it would"},
    {"it'll", "it will"},       {"it's", "it is"},           {"let's", "let us"},
    {"ma'am", "madam"},         {"mayn't", "may not"},       {"might've", "might have"},
    {"mightn't", "might not"},  {"must've", "must have"},    {"mustn't", "must not"},
    {"needn't", "need not"},    {"oughtn't", "ought not"},   {"shan't", "shall not"},
    {"she'd", "she would"},     {"she'd've", "she would have"}, {"she'll", "she will"},
    {"she's", "she is"},        {"should've", "should have"}, {"shouldn't", "should not"},
    {"shouldn't've", "should not have"}, {"so've", "so have"}, {"that'd", "that would"},
    {"that'll", "that will"},   {"that's", "that is"},       {"there'd", "there would"},
    {"there'll", "there will"}, {"there's", "there is"},     {"these're", "these are"},
    {"they'd", "they would"},   {"they'd've", "they would have"}, {"they'll", "they will"},
    {"they're", "they are"},    {"they've", "they have"},    {"this's", "this is"},
    {"those're", "those are"},  {"to've", "to have"},        {"wasn't", "was not"},
    {"we'd", "we would"},       {"we'd've", "we would have"}, {"we'll", "we will"},
    {"we're", "we are"},        {"we've", "we have"},        {"weren't", "were not"},
    {"what'll", "what will"},   {"what're", "what are"},     {"what's", "what is"},
    {"what've", "what have"},   {"when's", "when is"},       {"where'd", "where did"},
    {"where's", "where is"},    {"where've", "where have"},  {"who'd", "who would"},
    {"who'll", "who will"},     {"who're", "who are"},       {"who's", "who is"},
    {"who've", "who have"},     {"why's", "why is"},         {"why'd", "why did"},
    {"will've", "will have"},   {"won't", "will not"},       {"won't've", "will not have"},
    {"would've", "would have"}, {"wouldn't", "would not"},   {"wouldn't've", "would not have"},
    {"y'all", "you all"},       {"you'd", "you would"},      {"you'd've", "you would have"},
    {"you'll", "you will"},     {"you're", "you are"},       {"you've", "you have"},
    {"gonna", "going to"},      {"gotta", "got to"},         {"wanna", "want to"},
    {"dont", "do not"},         {"doesnt", "does not"},      {"didnt", "did not"},
    {"isnt", "is not"},         {"wasnt", "was not"},        {"arent", "are not"},
    {"werent", "were not"},     {"couldnt", "could not"},    {"shouldnt", "should not"},
    {"wouldnt", "would not"},   {"havent", "have not"},      {"hasnt", "has not"},
    {"hadnt", "had not"},       {"im", "i am"},              {"ive", "i have"},
    {"youre", "you are"},       {"theyre", "they are"},      {"doesn't've", "does not have"},
    {"idk", "i do not know"},   {"tbh", "to be honest"},
};

const std::unordered_map<std::string, std::string>& contraction_map() {
  static const std::unordered_map<std::string, std::string> m(kContractions.begin(),
                                                              kContractions.end());
  return m;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

// Lenient decoder: invalid bytes decode to U+FFFD, which is later dropped.
std::vector<char32_t> decode_utf8(std::string_view s) {
  std::vector<char32_t> out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    int len = 0;
    char32_t cp = 0;
    if (c < 0x80) {
      len = 1;
      cp = c;
    } else if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    if (i + len > s.size()) {
      out.push_back(0xFFFD);
      break;
    }
    bool ok = true;
    for (int k = 1; k < len; ++k) {
      const auto cc = static_cast<unsigned char>(s[i + k]);
      if ((cc & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (cc & 0x3F);
    }
    if (!ok) {
      out.push_back(0xFFFD);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

// ASCII alphanumerics and Latin-1/Latin Extended letters survive.
bool is_word_char(char32_t cp) {
  if (cp < 0x80) return std::isalnum(static_cast<int>(cp)) != 0;
  return cp >= 0xC0 && cp <= 0x24F && cp != 0xD7 && cp != 0xF7;
}

bool is_apostrophe(char32_t cp) { return cp == U'\'' || cp == 0x2018 || cp == 0x2019 || cp == 0x02BC; }

std::string expand_word(std::string word) {
  while (!word.empty() && word.front() == '\'') word.erase(word.begin());
  while (!word.empty() && word.back() == '\'') word.pop_back();
  if (word.empty()) return word;
  const auto& table = contraction_map();
  if (auto it = table.find(to_lower(word)); it != table.end()) {
    std::string exp = it->second;
    if (std::isupper(static_cast<unsigned char>(word.front()))) {
      exp.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(exp.front())));
    }
    return exp;
  }
  std::erase(word, '\'');
  return word;
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& contraction_table() { return kContractions; }

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> split_words(std::string_view sentence) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < sentence.size()) {
    while (i < sentence.size() && std::isspace(static_cast<unsigned char>(sentence[i]))) ++i;
    std::size_t j = i;
    while (j < sentence.size() && !std::isspace(static_cast<unsigned char>(sentence[j]))) ++j;
    if (j > i) out.emplace_back(sentence.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string normalize_text(std::string_view raw) {
  // Pass 1: keep word characters, apostrophes and periods; everything else
  // becomes a space.
  std::string cleaned;
  cleaned.reserve(raw.size());
  for (char32_t cp : decode_utf8(raw)) {
    if (is_word_char(cp)) {
      append_utf8(cleaned, cp);
    } else if (is_apostrophe(cp)) {
      cleaned += '\'';
    } else if (cp == U'.') {
      cleaned += '.';
    } else {
      cleaned += ' ';
    }
  }

  // Pass 2: per sentence, expand contractions and rejoin.
  std::string out;
  std::size_t start = 0;
  while (start <= cleaned.size()) {
    std::size_t stop = cleaned.find('.', start);
    if (stop == std::string::npos) stop = cleaned.size();
    std::string sentence;
    for (auto& w : split_words(std::string_view(cleaned).substr(start, stop - start))) {
      std::string e = expand_word(std::move(w));
      if (e.empty()) continue;
      if (!sentence.empty()) sentence += ' ';
      sentence += e;
    }
    if (!sentence.empty()) {
      if (!out.empty()) out += ' ';
      out += sentence;
      out += '.';
    }
    start = stop + 1;
  }
  return out;
}

std::vector<std::string> split_sentences(std::string_view normalized) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= normalized.size()) {
    std::size_t stop = normalized.find('.', start);
    if (stop == std::string_view::npos) stop = normalized.size();
    auto words = split_words(normalized.substr(start, stop - start));
    if (!words.empty()) {
      std::string s;
      for (auto& w : words) {
        if (!s.empty()) s += ' ';
        s += w;
      }
      out.push_back(std::move(s));
    }
    start = stop + 1;
  }
  return out;
}

}  // namespace blame
