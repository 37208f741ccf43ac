#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "blame/corpus.hpp"
#include "blame/error.hpp"
#include "blame/kernels.hpp"
#include "blame/pipeline.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 2, kMissing = 3, kData = 4 };

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"blamekit: blame-assignment experiments over annotated forum posts"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  int jobs = 0;
  std::string seed;
  std::string out;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "pipeline config file");
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "override the config seed");
  app.add_option("--out", out, "override the output directory");
  app.add_option("--set", overrides, "override any config key (key=value)");

  std::vector<CLI::App*> stage_cmds;
  for (blame::Stage s : blame::all_stages()) {
    const std::string name(blame::to_string(s));
    stage_cmds.push_back(app.add_subcommand(name, "run the " + name + " stage"));
  }
  auto* pipeline = app.add_subcommand("pipeline", "run every stage in order");
  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "check an interchange file");
  validate->add_option("file", validate_path, "interchange JSONL")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) {
      const auto errors = blame::validate_interchange_file(validate_path);
      for (const auto& e : errors) std::cerr << e << "\n";
      std::cout << validate_path << ": " << errors.size() << " error(s)\n";
      return errors.empty() ? kOk : kData;
    }

    blame::PipelineConfig config;
    if (!config_path.empty()) config = blame::load_config(config_path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw blame::UsageError("--set expects key=value, got '" + kv + "'");
      blame::set_config_value(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!seed.empty()) blame::set_config_value(config, "seed", seed);
    if (!out.empty()) blame::set_config_value(config, "out", out);
    if (jobs > 0) config.jobs = jobs;

    std::cerr << "kernels: " << blame::kernels::isa_name(blame::kernels::active_isa()) << "\n";
    if (*pipeline) {
      blame::run_pipeline(config, std::cerr);
      return kOk;
    }
    for (std::size_t i = 0; i < stage_cmds.size(); ++i) {
      if (*stage_cmds[i]) blame::run_stage(blame::all_stages()[i], config, std::cerr);
    }
    return kOk;
  } catch (const blame::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const blame::MissingArtifact& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMissing;
  } catch (const blame::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  }
}
