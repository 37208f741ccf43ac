#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "support/fixtures.hpp"

using blame::testing::TempDir;

namespace {

struct RunResult {
  int code = -1;
  std::string err;
  std::string out;
};

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

RunResult run(const TempDir& dir, const std::string& args) {
  const auto out = dir.path() / "stdout.txt", err = dir.path() / "stderr.txt";
  const std::string cmd = std::string("'") + BLAMEKIT_EXE + "' " + args + " >'" + out.string() + "' 2>'" +
                          err.string() + "'";
  const int status = std::system(cmd.c_str());
  RunResult r;
  if (WIFEXITED(status)) r.code = WEXITSTATUS(status);
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

std::string config() { return "--config '" + blame::testing::data_path("synthetic/pipeline.conf").string() + "'"; }

}  // namespace

TEST_CASE("usage errors exit 2") {
  TempDir dir("cli");
  CHECK(run(dir, "").code == 2);
  CHECK(run(dir, "frobnicate").code == 2);
  CHECK(run(dir, "--jobs 0 ingest").code == 2);
  CHECK(run(dir, config() + " --set colour=red ingest").code == 2);
  CHECK(run(dir, config() + " --set novalue ingest").code == 2);
  CHECK(run(dir, "--help").code == 0);
}

TEST_CASE("train before featurize exits 3 naming the feature matrix") {
  TempDir dir("cli");
  const auto r = run(dir, config() + " --out '" + (dir.path() / "out").string() + "' train");
  CHECK(r.code == 3);
  CHECK(r.err.find("features") != std::string::npos);
}

TEST_CASE("missing config exits 3") {
  TempDir dir("cli");
  CHECK(run(dir, "--config /nonexistent.conf ingest").code == 3);
}

TEST_CASE("validate") {
  TempDir dir("cli");
  auto r = run(dir, "validate '" + blame::testing::fixture_path("worked_example.jsonl").string() + "'");
  CHECK(r.code == 0);
  CHECK(r.out.find("0 error(s)") != std::string::npos);
  std::ofstream(dir.path() / "bad.jsonl") << "{\"id\": \"x\", \"sentences\": [{\"tokens\": []}]}\nnot json\n";
  r = run(dir, "validate '" + (dir.path() / "bad.jsonl").string() + "'");
  CHECK(r.code == 4);
  CHECK(r.err.find("line 2:") != std::string::npos);
}

TEST_CASE("bad data exits 4") {
  TempDir dir("cli");
  std::ofstream(dir.path() / "broken.jsonl") << "{oops\n";
  const std::string base = config() + " --set interchange='" + (dir.path() / "broken.jsonl").string() +
                           "' --out '" + (dir.path() / "out").string() + "' ";
  // ingest skips the bad record and counts it; nothing is left to split
  const auto ingest = run(dir, base + "ingest");
  CHECK(ingest.code == 0);
  CHECK(ingest.err.find("1 invalid") != std::string::npos);
  const auto extract = run(dir, base + "extract");
  CHECK(extract.code == 4);
  CHECK(extract.err.find("too small") != std::string::npos);
}

TEST_CASE("stages run in sequence and report the kernel ISA") {
  TempDir dir("cli");
  const std::string base = config() + " --jobs 2 --out '" + (dir.path() / "out").string() + "' ";
  for (const char* stage : {"ingest", "extract", "topics", "featurize", "train", "evaluate", "interpret", "bias"}) {
    CAPTURE(stage);
    const auto r = run(dir, base + stage);
    CHECK(r.code == 0);
    if (std::string(stage) == "ingest") CHECK(r.err.find("kernels: ") != std::string::npos);
  }
  for (const char* f : {"metrics.tsv", "metrics.json", "odds_ratios.tsv", "bias.tsv", "bias.json"})
    CHECK(std::filesystem::exists(dir.path() / "out" / f));
}
