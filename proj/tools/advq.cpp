// Command-line driver for the cloze benchmark pipeline.
//
// Exit codes: 0 success, 1 runtime failure, 2 missing upstream artifact,
// 3 configuration error.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "advq/config.hpp"
#include "advq/pipeline.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitMissingArtifact = 2;
constexpr int kExitConfig = 3;

const char* describe(advq::Stage stage) {
  switch (stage) {
    case advq::Stage::ingest: return "load the corpus and apply the removal list";
    case advq::Stage::extract: return "mask questions and pick each narrative's ground truth";
    case advq::Stage::pair: return "pair similar narratives greedily";
    case advq::Stage::build: return "filter question pairs and assemble instances";
    case advq::Stage::diversity: return "cluster narratives and list topic keywords";
    case advq::Stage::train: return "split instances and train the similarity baseline";
    case advq::Stage::evaluate: return "score the baseline and the zero-weight model";
    case advq::Stage::report: return "write the report and summary CSVs";
  }
  return "";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build binary-choice cloze instances from advice-seeking posts and evaluate them"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string stage_dir;
  bool quiet = false;
  app.add_option("-c,--config", config_path, "pipeline config (JSON)")->required();
  app.add_option("--seed", seed, "override the root seed");
  app.add_option("--stage-dir", stage_dir, "artifact directory (default: paths.output_dir)");
  app.add_flag("-q,--quiet", quiet, "suppress progress lines");

  std::optional<advq::Stage> chosen;
  bool all = false;
  for (auto stage : advq::kAllStages) {
    auto* sub = app.add_subcommand(std::string(advq::to_string(stage)), describe(stage));
    sub->callback([&chosen, stage] { chosen = stage; });
  }
  app.add_subcommand("run-all", "run every stage in order")->callback([&all] { all = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    auto config = advq::load_config(config_path);
    if (seed) config.seed = *seed;
    const std::filesystem::path dir =
        stage_dir.empty() ? config.paths.output_dir : std::filesystem::path(stage_dir);
    std::ostream* log = quiet ? nullptr : &std::cerr;
    if (all) {
      advq::run_all(config, dir, log);
    } else {
      advq::run_stage(*chosen, config, dir, log);
    }
  } catch (const advq::MissingArtifactError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMissingArtifact;
  } catch (const advq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return 0;
}
