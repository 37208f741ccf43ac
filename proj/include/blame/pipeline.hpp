#pragma once

// Stage driver: configuration, artifact layout and the per-stage runners
// behind the blamekit command line.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "blame/corpus.hpp"
#include "blame/features.hpp"
#include "blame/model.hpp"
#include "blame/topics.hpp"

namespace blame {

struct PipelineConfig {
  std::filesystem::path interchange;
  std::filesystem::path raw_dump;  // optional
  std::filesystem::path lexicons;
  std::filesystem::path people;
  std::filesystem::path out = "out";
  std::uint64_t seed = 13;
  int jobs = 1;
  SplitSpec split;
  std::vector<int> lda_grid = default_k_grid();
  int lda_iterations = 1000;
  double lda_alpha = 0.0;
  double lda_beta = 0.01;
  int min_posts = kDefaultMinPosts;
  int min_df = kDefaultMinDf;
  std::vector<Penalty> penalties = default_penalties();
  std::vector<double> reg_weights = default_reg_weights();
  int runs = kDefaultRuns;
  FeatureToggles features;
  std::vector<std::set<FeatureGroup>> ablations;
  bool haldane = false;
};

// Key/value text ("key = value", '#' comments). Relative paths resolve
// against `base_dir`. Unknown keys and malformed values throw UsageError.
PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);
// Applies one "key=value" override.
void set_config_value(PipelineConfig& config, std::string_view key, std::string_view value,
                      const std::filesystem::path& base_dir = {});
// Canonical key=value listing; `out` and `jobs` are left out because they do
// not change any result.
std::string canonical_config(const PipelineConfig& config);
std::string config_hash(const PipelineConfig& config);

enum class Stage { ingest, extract, topics, featurize, train, evaluate, interpret, bias };
std::string_view to_string(Stage s);
std::optional<Stage> parse_stage(std::string_view s);
const std::vector<Stage>& all_stages();

namespace artifacts {
inline constexpr std::string_view kCorpus = "corpus.jsonl";
inline constexpr std::string_view kIngestReport = "ingest.tsv";
inline constexpr std::string_view kDemographics = "demographics.tsv";
inline constexpr std::string_view kSplit = "split.tsv";
inline constexpr std::string_view kExtractions = "extractions.tsv";
inline constexpr std::string_view kTopics = "topics.tsv";
inline constexpr std::string_view kTopicWords = "topic_words.tsv";
inline constexpr std::string_view kTopicSelection = "topic_selection.tsv";
inline constexpr std::string_view kSchema = "schema.tsv";
inline constexpr std::string_view kFeatures = "features.tsv";
inline constexpr std::string_view kDocStats = "doc_stats.tsv";
inline constexpr std::string_view kModel = "model.txt";
inline constexpr std::string_view kGrid = "grid.tsv";
inline constexpr std::string_view kMetrics = "metrics.tsv";
inline constexpr std::string_view kMetricsJson = "metrics.json";
inline constexpr std::string_view kOddsRatios = "odds_ratios.tsv";
inline constexpr std::string_view kOddsRatiosJson = "odds_ratios.json";
inline constexpr std::string_view kBias = "bias.tsv";
inline constexpr std::string_view kBiasJson = "bias.json";
}  // namespace artifacts

// Runs one stage. Missing inputs throw MissingArtifact naming the artifact;
// bad data throws DataError. Progress lines go to `log`.
void run_stage(Stage stage, const PipelineConfig& config, std::ostream& log);
void run_pipeline(const PipelineConfig& config, std::ostream& log);

}  // namespace blame
