#pragma once

#include <stdexcept>
#include <string>

namespace blame {

// Malformed input data: bad interchange records, lexicon files, matrices.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A pipeline stage was asked to run before its inputs exist.
class MissingArtifact : public std::runtime_error {
 public:
  explicit MissingArtifact(const std::string& artifact)
      : std::runtime_error("missing artifact: " + artifact), artifact_(artifact) {}
  const std::string& artifact() const noexcept { return artifact_; }

 private:
  std::string artifact_;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace blame
