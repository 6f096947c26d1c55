#pragma once

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace eeht::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes shared by every command.
enum ExitCode : int { kOk = 0, kNumerical = 1, kUsage = 2 };

/// Provenance record written next to every output.
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;  // full command line after the program name
  nlohmann::json parameters = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::map<std::string, std::string> input_digests;   // path -> sha256 hex
  std::map<std::string, std::string> output_digests;  // path -> sha256 hex
  std::map<std::string, double> timings;               // seconds
  std::string version = kVersion;

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Serializes the manifest atomically.
void write_manifest(const std::filesystem::path& path, const RunManifest& m);
RunManifest read_manifest(const std::filesystem::path& path);

/// Timing protocol behind `bench`. Each trial draws a fresh synthetic
/// instance; "direct" solves P(N,N) on the reduced matrix in one LP, capped
/// at `direct_cap` seconds (a capped run reports the cap as a lower bound).
struct BenchConfig {
  std::vector<std::size_t> sizes;
  std::size_t d = 50;
  std::size_t r = 10;
  std::size_t trials = 3;
  std::uint64_t seed = 0;
  double nu = 0.1;
  double direct_cap = 300.0;
  std::size_t lambda = 10;
  std::size_t mu = 100;
  bool rce_dir = true;
  bool direct = true;
};

struct BenchRow {
  std::size_t n = 0;
  double rce_sr_seconds = 0.0;
  double rce_dir_seconds = 0.0;
  double direct_seconds = 0.0;
  std::size_t direct_capped = 0;  // trials that hit the cap
  double rce_sr_objective = 0.0;  // means over trials
  double rce_dir_objective = 0.0;
  double direct_objective = 0.0;  // over uncapped trials; NaN if none
  double max_sr_direct_gap = 0.0; // max |rce-sr − direct| over uncapped trials
};

std::vector<BenchRow> run_bench(const BenchConfig& cfg, std::ostream* log = nullptr);

/// Parses argv (argv[0] is the program name) and runs one command.
/// Returns 0 on success, 1 on numerical failure, 2 on usage or input errors.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace eeht::cli
