#include "manifest.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mubest/errors.hpp"

namespace mubest::cli {

using json = nlohmann::ordered_json;

namespace {

json identity_fields(const RunManifest& m) {
  json j;
  j["command"] = m.command;
  j["parameters"] = m.parameters;
  j["seed"] = m.seed;
  j["tool_version"] = m.tool_version;
  return j;
}

}  // namespace

std::string RunManifest::hash() const {
  const std::string text = identity_fields(*this).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string RunManifest::to_json() const {
  json j = identity_fields(*this);
  j["output_paths"] = output_paths;
  j["wall_time_s"] = wall_time_s;
  j["manifest_hash"] = hash();
  return j.dump(2);
}

std::filesystem::path write_manifest(const RunManifest& manifest, const std::filesystem::path& primary) {
  std::filesystem::path path = primary;
  path += ".manifest.json";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << manifest.to_json() << '\n';
  if (!out) throw IoError("write to '" + path.string() + "' failed");
  return path;
}

RunManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    const json j = json::parse(buffer.str());
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.parameters = j.at("parameters").get<std::map<std::string, std::string>>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.output_paths = j.at("output_paths").get<std::vector<std::string>>();
    m.tool_version = j.at("tool_version").get<std::string>();
    m.wall_time_s = j.at("wall_time_s").get<double>();
    return m;
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace mubest::cli
