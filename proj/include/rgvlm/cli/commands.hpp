#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "rgvlm/cli/config.hpp"

namespace rgvlm::cli {

// One function per subcommand. All of them throw (ValidationError,
// DataFormatError, BackendError, NumericsError) instead of returning codes;
// main() maps exception types to exit codes.

// Generates scripted demonstrations into a dataset directory.
void run_gen_data(const AppConfig& cfg, const std::filesystem::path& out_dir);

// Attaches one reward stream to every trajectory of a dataset. Sources:
//   oracle     scripted annotator over rendered windows (hermetic)
//   lvlm       remote chat endpoint over the same windows
//   sparse     1 on the final transition, 0 elsewhere
//   frame_sim  instruction/frame embedding similarity per transition
//   seq_sim    instruction/sequence similarity on the final transition
//   combined   dense lvlm (or oracle) labels plus the terminal bonus
// With resume=true, trajectories already present in the labels file are
// kept as-is and only the missing ones are annotated.
void run_label(const AppConfig& cfg, const std::filesystem::path& data_dir,
               const std::string& source, bool resume);

// Offline RL on a dataset + one label source; writes a policy artifact.
void run_train(const AppConfig& cfg, const std::filesystem::path& data_dir,
               const std::string& source, const std::filesystem::path& artifact_path);

// Runs the evaluation protocol (fixed and randomized starts) for a trained
// policy and appends nothing: the CSV at csv_path is overwritten.
void run_eval(const AppConfig& cfg, const std::filesystem::path& artifact_path,
              const std::string& method, const std::filesystem::path& csv_path);

// Merges eval CSVs into one comparison table against a baseline method.
void run_report(const std::vector<std::filesystem::path>& csv_paths,
                const std::string& baseline, const std::filesystem::path& out_path);

}  // namespace rgvlm::cli
