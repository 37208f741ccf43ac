#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace blame {

// Emojis, symbols and punctuation other than periods are removed,
// contractions expanded ("can't" -> "can not"), whitespace collapsed.
// Sentences are the runs of words between periods; the result is written
// as "first sentence. second sentence." so it is a fixed point of itself.
std::string normalize_text(std::string_view raw);

// Splits normalized text on periods, trimming and dropping empty pieces.
std::vector<std::string> split_sentences(std::string_view normalized);

// Lowercases ASCII letters only.
std::string to_lower(std::string_view s);

// Whitespace tokenization of one normalized sentence.
std::vector<std::string> split_words(std::string_view sentence);

// The shipped contraction table (lowercase key -> expansion).
const std::vector<std::pair<std::string, std::string>>& contraction_table();

}  // namespace blame
