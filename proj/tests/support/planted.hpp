#pragma once

// Feature-space corpus where only the psycholinguistic block carries label
// signal.

#include <cstdint>
#include <string>

#include "blame/features.hpp"
#include "blame/model.hpp"
#include "blame/random.hpp"

namespace blame::testing {

struct PlantedCorpus {
  FeatureSchema schema;
  Dataset train, dev, test;
};

struct PlantedOptions {
  std::size_t docs = 500;
  std::size_t per_group = 10;
  std::size_t signal_columns = 5;
  double shift = 0.8;
  bool shuffle_labels = false;
  std::uint64_t seed = 7;
};

inline PlantedCorpus make_planted(const PlantedOptions& o = {}) {
  PlantedCorpus c;
  for (FeatureGroup g : {FeatureGroup::contextual, FeatureGroup::psycholinguistic, FeatureGroup::linguistic}) {
    for (std::size_t j = 0; j < o.per_group; ++j) {
      c.schema.names.push_back(std::string(to_string(g)) + "_" + std::to_string(j));
      c.schema.groups.push_back(g);
    }
  }
  Rng rng(o.seed);
  const std::size_t d = c.schema.size();
  Matrix x(o.docs, d);
  std::vector<int> y(o.docs);
  for (std::size_t i = 0; i < o.docs; ++i) {
    y[i] = static_cast<int>(i % 2);
    for (std::size_t j = 0; j < d; ++j) x.at(i, j) = rng.normal();
    for (std::size_t k = 0; k < o.signal_columns; ++k) x.at(i, o.per_group + k) += (2 * y[i] - 1) * o.shift;
  }
  if (o.shuffle_labels) rng.shuffle(std::span<int>(y));
  // 60 / 20 / 20 split in row order (rows are already random).
  const std::size_t n_train = o.docs * 6 / 10, n_dev = o.docs * 2 / 10;
  auto take = [&](std::size_t from, std::size_t to) {
    Dataset ds;
    ds.x = Matrix(to - from, d);
    for (std::size_t i = from; i < to; ++i) {
      for (std::size_t j = 0; j < d; ++j) ds.x.at(i - from, j) = x.at(i, j);
      ds.y.push_back(y[i]);
    }
    return ds;
  };
  c.train = take(0, n_train);
  c.dev = take(n_train, n_train + n_dev);
  c.test = take(n_train + n_dev, o.docs);
  return c;
}

}  // namespace blame::testing
