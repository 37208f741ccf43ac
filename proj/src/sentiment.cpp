#include <array>
#include <cmath>

#include "blame/features.hpp"

namespace blame {
namespace {

constexpr std::array<std::string_view, 3> kNegators = {"not", "no", "never"};
constexpr std::array<std::string_view, 14> kBoosters = {
    "very",  "really",     "extremely", "so",        "too",     "incredibly", "totally",
    "super", "absolutely", "completely", "especially", "highly", "truly",      "quite"};
constexpr std::array<std::string_view, 8> kDampeners = {"slightly", "somewhat", "barely", "hardly",
                                                        "kinda",    "sorta",    "partly", "marginally"};

template <std::size_t N>
bool in(const std::array<std::string_view, N>& a, std::string_view w) {
  for (auto x : a)
    if (x == w) return true;
  return false;
}

double sentence_score(const std::vector<std::string>& toks, const Lexicon& valence) {
  double sum = 0.0;
  for (std::size_t i = 0; i < toks.size(); ++i) {
    const auto v = valence.lookup(toks[i]);
    if (!v || (*v)[0] == 0.0) continue;
    double s = (*v)[0];
    const double sign = s > 0 ? 1.0 : -1.0;
    if (i >= 1) {
      if (in(kBoosters, toks[i - 1])) s += sign * kBoostIncrement;
      if (in(kDampeners, toks[i - 1])) s -= sign * kBoostIncrement;
    }
    for (std::size_t back = 1; back <= kNegationWindow && back <= i; ++back) {
      if (in(kNegators, toks[i - back])) {
        s = -s;
        break;
      }
    }
    sum += s;
  }
  return sum / std::sqrt(sum * sum + kSentimentAlpha);
}

}  // namespace

std::string_view to_string(SentimentCategory c) {
  switch (c) {
    case SentimentCategory::positive: return "positive";
    case SentimentCategory::neutral: return "neutral";
    case SentimentCategory::negative: return "negative";
  }
  return "neutral";
}

Sentiment sentiment_compound(std::span<const std::vector<std::string>> sentences, const Lexicon& valence) {
  double total = 0.0;
  int n = 0;
  for (const auto& s : sentences) {
    if (s.empty()) continue;
    total += sentence_score(s, valence);
    ++n;
  }
  Sentiment out;
  out.compound = n == 0 ? 0.0 : total / n;
  if (out.compound >= 0.05) {
    out.category = SentimentCategory::positive;
  } else if (out.compound <= -0.05) {
    out.category = SentimentCategory::negative;
  }
  return out;
}

}  // namespace blame
