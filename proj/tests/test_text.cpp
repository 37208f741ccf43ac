#include <doctest.h>

#include <set>
#include <string>

#include "blame/random.hpp"
#include "blame/text.hpp"

using namespace blame;

TEST_CASE("normalize_text examples") {
  CHECK(normalize_text("can't go!! \xF0\x9F\x98\x80") == "can not go.");
  CHECK(normalize_text("") == "");
  CHECK(normalize_text("   ") == "");
  CHECK(normalize_text("...") == "");
  CHECK(normalize_text("Wait,   what?? OK.") == "Wait what OK.");
  CHECK(normalize_text("I\xE2\x80\x99m here") == "I am here.");
}

TEST_CASE("sentences are words between periods") {
  const auto n = normalize_text("I was late. She left.");
  CHECK(n == "I was late. She left.");
  const auto s = split_sentences(n);
  REQUIRE(s.size() == 2);
  CHECK(s[0] == "I was late");
  CHECK(s[1] == "She left");
  CHECK(split_sentences("").empty());
}

TEST_CASE("every table contraction expands") {
  const auto& table = contraction_table();
  CHECK(table.size() >= 100);
  std::set<std::string> keys;
  for (const auto& [key, expansion] : table) {
    CAPTURE(key);
    CHECK(keys.insert(key).second);
    CHECK(key == to_lower(key));
    // Hand-tokenized oracle: the expansion, words single-spaced, one period.
    CHECK(normalize_text(key) == expansion + ".");
    CHECK(normalize_text("x " + key + " y") == "x " + expansion + " y.");
  }
}

TEST_CASE("capitalized contraction keeps its capital") {
  CHECK(normalize_text("Can't") == "Can not.");
  CHECK(normalize_text("I'm") == "I am.");
}

TEST_CASE("normalize_text is idempotent") {
  const std::string alphabet[] = {"a",  "B",  "can't", "I'm", ".",  ",",  "!",  "?",   " ",      "  ", "\t",
                                  "'",  "9",  "\xC3\xA9", "\xF0\x9F\x98\x80", "won't", "--", "(", "25F", ")"};
  Rng rng(21);
  for (int trial = 0; trial < 1000; ++trial) {
    std::string s;
    const auto len = rng.below(30);
    for (std::size_t i = 0; i < len; ++i) s += alphabet[rng.below(std::size(alphabet))];
    CAPTURE(s);
    const auto once = normalize_text(s);
    CHECK(normalize_text(once) == once);
    for (char c : once) CHECK((c == '.' || c == ' ' || c == '\'' || (c & 0x80) || std::isalnum(static_cast<unsigned char>(c))));
  }
}

TEST_CASE("split_words and to_lower") {
  CHECK(split_words("  a  bb\tc ") == std::vector<std::string>{"a", "bb", "c"});
  CHECK(to_lower("AbC\xC3\x89") == "abc\xC3\x89");
}
