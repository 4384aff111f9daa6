#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rgvlm/env/types.hpp"
#include "rgvlm/iql/iql.hpp"

namespace rgvlm::iql {

// A trained policy plus everything needed to rebuild its input encoding:
// env config (feature layout), instruction vocabulary, hyperparameters and
// the training seed. Weights are stored in float64 regardless of the
// training scalar.
struct PolicyArtifact {
  env::EnvConfig env_config;
  IqlConfig iql;
  std::vector<std::string> vocab;
  std::uint64_t seed = 0;
  int obs_dim = 0;
  int num_actions = 0;
  std::vector<double> v_params, q_params, q_target_params, pi_params;
};

// Binary layout: magic "RGVLMPA1", little-endian u64 header length, header
// JSON, then the four flat weight arrays back to back as little-endian
// float64. The header records a SHA-256 of the weight bytes; load_artifact
// verifies it and throws DataFormatError on any mismatch.
void save_artifact(const std::filesystem::path& path, const PolicyArtifact& artifact);
PolicyArtifact load_artifact(const std::filesystem::path& path);

}  // namespace rgvlm::iql
