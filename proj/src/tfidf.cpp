#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "blame/error.hpp"
#include "blame/features.hpp"
#include "blame/kernels.hpp"

namespace blame {

std::vector<std::string> ngrams(std::span<const std::string> tokens) {
  std::vector<std::string> out(tokens.begin(), tokens.end());
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) out.push_back(tokens[i] + " " + tokens[i + 1]);
  return out;
}

TfidfModel tfidf_fit(std::span<const std::vector<std::string>> docs, int min_df) {
  if (docs.empty()) throw DataError("cannot fit TF-IDF on an empty corpus");
  std::map<std::string, int> df;
  for (const auto& doc : docs) {
    const auto grams = ngrams(doc);
    const std::set<std::string> uniq(grams.begin(), grams.end());
    for (const auto& g : uniq) ++df[g];
  }
  TfidfModel m;
  m.doc_count = docs.size();
  const double n = static_cast<double>(docs.size());
  for (const auto& [term, count] : df) {
    if (count < min_df) continue;
    m.vocabulary.emplace(term, static_cast<int>(m.terms.size()));
    m.terms.push_back(term);
    m.idf.push_back(std::log((1.0 + n) / (1.0 + count)) + 1.0);
  }
  return m;
}

SparseVector tfidf_transform(const TfidfModel& model, std::span<const std::string> tokens) {
  std::map<int, double> counts;
  for (const auto& g : ngrams(tokens)) {
    if (auto it = model.vocabulary.find(g); it != model.vocabulary.end()) counts[it->second] += 1.0;
  }
  std::vector<int> cols;
  std::vector<double> vals;
  for (const auto& [c, tf] : counts) {
    cols.push_back(c);
    vals.push_back(tf * model.idf[c]);
  }
  const double norm = std::sqrt(kernels::sum_squares(vals));
  if (norm > 0.0) kernels::scale(vals, 1.0 / norm);
  SparseVector out;
  out.reserve(cols.size());
  for (std::size_t i = 0; i < cols.size(); ++i) out.emplace_back(cols[i], vals[i]);
  return out;
}

}  // namespace blame
