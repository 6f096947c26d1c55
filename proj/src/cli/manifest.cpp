#include "eeht/cli.hpp"

#include "eeht/datagen.hpp"

#include <openssl/evp.h>

#include <iomanip>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace eeht::cli {

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256: digest failed");
  }
  std::ostringstream ss;
  for (unsigned int i = 0; i < len; ++i) ss << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return ss.str();
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(datagen::read_file(path)); }

nlohmann::json RunManifest::to_json() const {
  return {{"command", command},
          {"argv", argv},
          {"parameters", parameters},
          {"seed", seed},
          {"input_digests", input_digests},
          {"output_digests", output_digests},
          {"timings", timings},
          {"version", version}};
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.argv = j.at("argv").get<std::vector<std::string>>();
  m.parameters = j.value("parameters", nlohmann::json::object());
  m.seed = j.value("seed", std::uint64_t{0});
  m.input_digests = j.value("input_digests", std::map<std::string, std::string>{});
  m.output_digests = j.value("output_digests", std::map<std::string, std::string>{});
  m.timings = j.value("timings", std::map<std::string, double>{});
  m.version = j.value("version", std::string{});
  return m;
}

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
  datagen::write_file_atomic(path, m.to_json().dump(2) + "\n");
}

RunManifest read_manifest(const std::filesystem::path& path) {
  try {
    return RunManifest::from_json(nlohmann::json::parse(datagen::read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw datagen::IoError(datagen::IoError::Kind::Parse, "manifest: " + std::string(e.what()));
  }
}

}  // namespace eeht::cli
