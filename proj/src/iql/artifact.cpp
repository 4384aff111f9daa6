#include "rgvlm/iql/artifact.hpp"

#include <cstring>
#include <fstream>

#include "rgvlm/common/errors.hpp"
#include "rgvlm/common/sha256.hpp"

namespace rgvlm::iql {

namespace {

constexpr char kMagic[8] = {'R', 'G', 'V', 'L', 'M', 'P', 'A', '1'};

void append_weights(std::vector<std::uint8_t>& out, const std::vector<double>& w) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(w.data());
  out.insert(out.end(), p, p + w.size() * sizeof(double));
}

std::vector<double> take_weights(const std::vector<std::uint8_t>& bytes, std::size_t& off,
                                 std::size_t count) {
  std::vector<double> w(count);
  std::memcpy(w.data(), bytes.data() + off, count * sizeof(double));
  off += count * sizeof(double);
  return w;
}

}  // namespace

void save_artifact(const std::filesystem::path& path, const PolicyArtifact& a) {
  std::vector<std::uint8_t> weights;
  append_weights(weights, a.v_params);
  append_weights(weights, a.q_params);
  append_weights(weights, a.q_target_params);
  append_weights(weights, a.pi_params);

  nlohmann::json header = {
      {"env_config", a.env_config},
      {"iql", a.iql},
      {"vocab", a.vocab},
      {"seed", a.seed},
      {"obs_dim", a.obs_dim},
      {"num_actions", a.num_actions},
      {"sizes",
       {{"v", a.v_params.size()},
        {"q", a.q_params.size()},
        {"q_target", a.q_target_params.size()},
        {"pi", a.pi_params.size()}}},
      {"weights_sha256", sha256_hex(weights)}};
  const std::string header_str = header.dump();

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot open " + path.string() + " for writing");
  out.write(kMagic, sizeof(kMagic));
  const std::uint64_t len = header_str.size();
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(header_str.data(), static_cast<std::streamsize>(header_str.size()));
  out.write(reinterpret_cast<const char*>(weights.data()),
            static_cast<std::streamsize>(weights.size()));
  if (!out) throw ValidationError("write failed for " + path.string());
}

PolicyArtifact load_artifact(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string() + " for reading");

  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw DataFormatError(path.string() + ": not a policy artifact (bad magic)");

  std::uint64_t len = 0;
  in.read(reinterpret_cast<char*>(&len), sizeof(len));
  if (!in || len == 0 || len > (1u << 20))
    throw DataFormatError(path.string() + ": implausible header length");

  std::string header_str(len, '\0');
  in.read(header_str.data(), static_cast<std::streamsize>(len));
  if (!in) throw DataFormatError(path.string() + ": truncated header");

  nlohmann::json header = nlohmann::json::parse(header_str, nullptr, false);
  if (header.is_discarded()) throw DataFormatError(path.string() + ": header is not valid JSON");

  PolicyArtifact a;
  std::size_t nv, nq, nqt, npi;
  try {
    a.env_config = header.at("env_config").get<env::EnvConfig>();
    a.iql = header.at("iql").get<IqlConfig>();
    a.vocab = header.at("vocab").get<std::vector<std::string>>();
    a.seed = header.at("seed").get<std::uint64_t>();
    a.obs_dim = header.at("obs_dim").get<int>();
    a.num_actions = header.at("num_actions").get<int>();
    nv = header.at("sizes").at("v").get<std::size_t>();
    nq = header.at("sizes").at("q").get<std::size_t>();
    nqt = header.at("sizes").at("q_target").get<std::size_t>();
    npi = header.at("sizes").at("pi").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DataFormatError(path.string() + ": header: " + e.what());
  }

  const std::size_t total = (nv + nq + nqt + npi) * sizeof(double);
  std::vector<std::uint8_t> weights(total);
  in.read(reinterpret_cast<char*>(weights.data()), static_cast<std::streamsize>(total));
  if (!in || in.gcount() != static_cast<std::streamsize>(total))
    throw DataFormatError(path.string() + ": truncated weights");

  const std::string want = header.at("weights_sha256").get<std::string>();
  const std::string got = sha256_hex(weights);
  if (want != got)
    throw DataFormatError(path.string() + ": weight checksum mismatch (expected " + want +
                          ", got " + got + ")");

  std::size_t off = 0;
  a.v_params = take_weights(weights, off, nv);
  a.q_params = take_weights(weights, off, nq);
  a.q_target_params = take_weights(weights, off, nqt);
  a.pi_params = take_weights(weights, off, npi);
  return a;
}

}  // namespace rgvlm::iql
