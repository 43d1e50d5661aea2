#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace mythqa {

// key = value lines, '#' comments, optional [section] headers. Keys under a
// section are stored as "section.key". Values may be double-quoted.
struct ConfigFile {
  std::map<std::string, std::string> values;

  static ConfigFile parse(std::istream& in, const std::string& origin = "<config>");
  static ConfigFile load(const std::filesystem::path& path);
};

// Hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_hex(const std::string& bytes);

struct RunManifest {
  std::string tool = "mythqa";
  std::string version;
  std::string command;
  std::vector<std::string> argv;
  nlohmann::json config = nlohmann::json::object();
  // path -> sha256
  std::map<std::string, std::string> inputs;

  void add_input(const std::filesystem::path& path);

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static RunManifest load(const std::filesystem::path& path);

  // Paths whose current digest differs from the recorded one.
  std::vector<std::string> changed_inputs() const;
};

std::string tool_version();

}  // namespace mythqa
