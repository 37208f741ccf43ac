#include <doctest.h>

#include <fstream>
#include <sstream>

#include "blame/error.hpp"
#include "blame/pipeline.hpp"
#include "blame/report.hpp"
#include "support/fixtures.hpp"

using namespace blame;
using blame::testing::TempDir;

namespace {

PipelineConfig synthetic_config(const std::filesystem::path& out) {
  auto c = load_config(testing::data_path("synthetic/pipeline.conf"));
  c.out = out;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string first_line(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = parse_config(
      "# comment\n"
      "interchange = corpus.jsonl\n"
      "seed = 7\n"
      "split = 0.6, 0.2, 0.2\n"
      "lda_grid = 2,4\n"
      "penalties = L2\n"
      "reg_weights = 0.5\n"
      "features = psycholinguistic,linguistic\n"
      "ablations = none;contextual+linguistic\n"
      "haldane = true\n",
      "/base");
  CHECK(c.interchange == std::filesystem::path("/base/corpus.jsonl"));
  CHECK(c.seed == 7);
  CHECK(c.split.train.num * 10 == 6 * c.split.train.den);
  CHECK(c.lda_grid == std::vector<int>{2, 4});
  CHECK(c.penalties == std::vector<Penalty>{Penalty::L2});
  CHECK(c.reg_weights == std::vector<double>{0.5});
  CHECK_FALSE(c.features.contextual);
  CHECK(c.features.linguistic);
  REQUIRE(c.ablations.size() == 2);
  CHECK(c.ablations[0].empty());
  CHECK(c.ablations[1] == std::set<FeatureGroup>{FeatureGroup::contextual, FeatureGroup::linguistic});
  CHECK(c.haldane);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("colour = red\n"), UsageError);
  CHECK_THROWS_AS(parse_config("seed = abc\n"), UsageError);
  CHECK_THROWS_AS(parse_config("split = 0.5,0.2,0.2\n"), UsageError);
  CHECK_THROWS_AS(parse_config("penalties = L3\n"), UsageError);
  CHECK_THROWS_AS(parse_config("no equals sign\n"), UsageError);
  CHECK_THROWS_AS(load_config("/nonexistent/pipeline.conf"), MissingArtifact);
}

TEST_CASE("config hash ignores out and jobs only") {
  PipelineConfig a;
  const auto h = config_hash(a);
  CHECK(h.size() == 16);
  PipelineConfig b = a;
  b.out = "elsewhere";
  b.jobs = 8;
  CHECK(config_hash(b) == h);
  set_config_value(b, "seed", "99");
  CHECK(config_hash(b) != h);
  PipelineConfig c = a;
  set_config_value(c, "reg_weights", "0.1");
  CHECK(config_hash(c) != h);
  CHECK(canonical_config(a).find("out") == std::string::npos);
}

TEST_CASE("stage names") {
  CHECK(all_stages().size() == 8);
  for (Stage s : all_stages()) CHECK(parse_stage(to_string(s)) == s);
  CHECK_FALSE(parse_stage("nope").has_value());
}

TEST_CASE("train before featurize names the missing artifact") {
  TempDir dir("pipe");
  std::ostringstream log;
  try {
    run_stage(Stage::train, synthetic_config(dir.path()), log);
    FAIL("expected MissingArtifact");
  } catch (const MissingArtifact& e) {
    CHECK(e.artifact().find("features") != std::string::npos);
  }
}

TEST_CASE("full pipeline twice is byte identical") {
  TempDir a("pipe-a"), b("pipe-b");
  std::ostringstream log;
  const auto ca = synthetic_config(a.path());
  auto cb = synthetic_config(b.path());
  cb.jobs = 2;
  run_pipeline(ca, log);
  run_pipeline(cb, log);

  const std::string_view names[] = {
      artifacts::kCorpus,   artifacts::kIngestReport, artifacts::kDemographics, artifacts::kSplit,
      artifacts::kExtractions, artifacts::kTopics,   artifacts::kTopicWords,   artifacts::kTopicSelection,
      artifacts::kSchema,   artifacts::kFeatures,     artifacts::kDocStats,     artifacts::kModel,
      artifacts::kGrid,     artifacts::kMetrics,      artifacts::kMetricsJson,  artifacts::kOddsRatios,
      artifacts::kOddsRatiosJson, artifacts::kBias,   artifacts::kBiasJson};
  const std::string hash = config_hash(ca);
  for (auto name : names) {
    CAPTURE(name);
    const auto pa = a.path() / name, pb = b.path() / name;
    REQUIRE(std::filesystem::exists(pa));
    CHECK(slurp(pa) == slurp(pb));
    CHECK(slurp(pa).find(hash) != std::string::npos);
  }
  CHECK(first_line(a.path() / artifacts::kSchema).rfind("# schema_hash=", 0) == 0);

  const std::string metrics = slurp(a.path() / artifacts::kMetrics);
  for (const char* row : {"Random", "Length", "LR", "LR - contextual", "LR - psycholinguistic", "LR - linguistic"})
    CHECK(metrics.find(std::string("\n") + row + "\t") != std::string::npos);

  // Re-running one stage reproduces its artifacts.
  const std::string before = slurp(a.path() / artifacts::kModel);
  run_stage(Stage::train, ca, log);
  CHECK(slurp(a.path() / artifacts::kModel) == before);
  const std::string or_before = slurp(a.path() / artifacts::kOddsRatios);
  run_stage(Stage::interpret, ca, log);
  CHECK(slurp(a.path() / artifacts::kOddsRatios) == or_before);
}

TEST_CASE("model under a different schema is rejected") {
  TempDir a("pipe-s");
  std::ostringstream log;
  auto c = synthetic_config(a.path());
  for (Stage s : {Stage::ingest, Stage::extract, Stage::topics, Stage::featurize, Stage::train}) run_stage(s, c, log);
  c.features.linguistic = false;
  run_stage(Stage::featurize, c, log);
  c.features.linguistic = true;
  CHECK_THROWS_AS(run_stage(Stage::evaluate, c, log), DataError);
}

TEST_CASE("report helpers") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");  // shortest round trip
  CHECK(format_fixed(0.12345, 2) == "0.12");
  CHECK(hex64(0xabcULL) == "0000000000000abc");
  CHECK(split_tab("a\tb\t") == std::vector<std::string>{"a", "b", ""});
  CHECK_THROWS_AS(read_file("/nonexistent/file"), MissingArtifact);
}
