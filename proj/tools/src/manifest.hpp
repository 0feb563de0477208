#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace mubest::cli {

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::uint64_t seed = 0;
  std::vector<std::string> output_paths;
  std::string tool_version;
  double wall_time_s = 0.0;

  /// FNV-1a over command, parameters, seed and version; stable across reruns.
  std::string hash() const;
  std::string to_json() const;
};

/// Writes `<primary>.manifest.json` and returns its path.
std::filesystem::path write_manifest(const RunManifest& manifest, const std::filesystem::path& primary);

RunManifest read_manifest(const std::filesystem::path& path);

}  // namespace mubest::cli
