#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

#include "rgvlm/annot/parse.hpp"
#include "rgvlm/cli/commands.hpp"
#include "rgvlm/cli/config.hpp"
#include "rgvlm/common/errors.hpp"

namespace {

// Anything left over after CLI11 is treated as a dotted config override
// (--iql.gamma=0.95). load_config rejects tokens that do not look like one.
rgvlm::cli::AppConfig config_for(CLI::App* sub, const std::string& config_file) {
  return rgvlm::cli::load_config(config_file, sub->remaining());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Instruction-following gridworld: demonstration generation, windowed "
      "reward annotation, offline RL, and evaluation."};
  app.require_subcommand(1);

  std::string config_file;
  std::string data_dir;
  std::string out_path;
  std::string artifact_path;
  std::string source;
  std::string method = "iql";
  std::string baseline = "sparse";
  std::vector<std::string> csv_paths;
  bool resume = false;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", config_file, "JSON config file (defaults apply without one)");
    sub->allow_extras();  // dotted overrides like --iql.gamma=0.95
  };

  CLI::App* gen = app.add_subcommand("gen-data", "Generate scripted demonstrations");
  gen->add_option("--out", out_path, "dataset directory to create")->required();
  add_config(gen);
  gen->callback([&] { rgvlm::cli::run_gen_data(config_for(gen, config_file), out_path); });

  CLI::App* label = app.add_subcommand("label", "Attach a reward stream to a dataset");
  label->add_option("--data", data_dir, "dataset directory")->required();
  label
      ->add_option("--source", source,
                   "oracle|lvlm|sparse|frame_sim|seq_sim|combined")
      ->required();
  label->add_flag("--resume", resume, "keep labels already on disk, annotate the rest");
  add_config(label);
  label->callback(
      [&] { rgvlm::cli::run_label(config_for(label, config_file), data_dir, source, resume); });

  CLI::App* train = app.add_subcommand("train", "Train a policy on labeled data");
  train->add_option("--data", data_dir, "dataset directory")->required();
  train->add_option("--source", source, "label source to train on")->default_val("oracle");
  train->add_option("--out", out_path, "policy artifact file to write")->required();
  add_config(train);
  train->callback(
      [&] { rgvlm::cli::run_train(config_for(train, config_file), data_dir, source, out_path); });

  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a trained policy");
  eval_cmd->add_option("--artifact", artifact_path, "policy artifact file")->required();
  eval_cmd->add_option("--method", method, "method name for the result rows");
  eval_cmd->add_option("--out", out_path, "CSV file to write")->required();
  add_config(eval_cmd);
  eval_cmd->callback([&] {
    rgvlm::cli::run_eval(config_for(eval_cmd, config_file), artifact_path, method, out_path);
  });

  CLI::App* report = app.add_subcommand("report", "Compare methods across eval CSVs");
  report->add_option("--csv", csv_paths, "eval CSV file (repeatable)")->required();
  report->add_option("--baseline", baseline, "method the ratios are computed against");
  report->add_option("--out", out_path, "also write the table to this file");
  report->callback([&] {
    std::vector<std::filesystem::path> paths(csv_paths.begin(), csv_paths.end());
    rgvlm::cli::run_report(paths, baseline, out_path);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const rgvlm::BackendError& e) {
    std::fprintf(stderr, "backend error: %s\n", e.what());
    return 2;
  } catch (const rgvlm::annot::ParseError& e) {
    // Unusable model output is a backend-side failure, not bad user input.
    std::fprintf(stderr, "backend error: %s\n", e.what());
    return 2;
  } catch (const rgvlm::NumericsError& e) {
    std::fprintf(stderr, "numerics error: %s\n", e.what());
    return 3;
  } catch (const rgvlm::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
