#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace ccplan::cli {

std::string sha256_hex(std::string_view data);

// UTC ISO-8601 time from SOURCE_DATE_EPOCH when set, otherwise the current time.
std::string run_timestamp();

struct RunManifest {
  std::string command;
  std::vector<std::string> arguments;  // full argument list after the program name
  std::string config_path;
  std::map<std::string, std::uint64_t> seeds;
  nlohmann::json solver = nlohmann::json::object();
  std::string output_dir;
  std::string timestamp;
  std::map<std::string, std::string> artifacts;  // relative path -> sha256

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& doc);
};

// Collects the files of one run; `finish` writes manifest.json last.
class OutputDir {
 public:
  explicit OutputDir(std::filesystem::path root);

  void write(const std::string& relative, std::string_view contents);
  void write_json(const std::string& relative, const nlohmann::json& doc);
  void finish(RunManifest manifest);

  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
  std::map<std::string, std::string> checksums_;
};

}  // namespace ccplan::cli
