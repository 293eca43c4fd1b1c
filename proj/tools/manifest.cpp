#include "manifest.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "ccplan/config_io.hpp"
#include "ccplan/text_io.hpp"

namespace ccplan::cli {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 digest failed");
  }
  std::ostringstream os;
  for (unsigned int i = 0; i < length; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int{digest[i]};
  return os.str();
}

std::string run_timestamp() {
  std::time_t seconds;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    char* end = nullptr;
    const long long v = std::strtoll(epoch, &end, 10);
    if (*end != '\0' || v < 0) throw std::invalid_argument("SOURCE_DATE_EPOCH must be a non-negative integer");
    seconds = static_cast<std::time_t>(v);
  } else {
    seconds = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm utc{};
  gmtime_r(&seconds, &utc);
  std::ostringstream os;
  os << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

nlohmann::json RunManifest::to_json() const {
  return {{"command", command},       {"arguments", arguments},   {"config", config_path},
          {"seeds", seeds},           {"solver", solver},         {"output_dir", output_dir},
          {"timestamp", timestamp},   {"artifacts", artifacts}};
}

RunManifest RunManifest::from_json(const nlohmann::json& doc) {
  RunManifest m;
  m.command = doc.at("command").get<std::string>();
  m.arguments = doc.at("arguments").get<std::vector<std::string>>();
  m.config_path = doc.value("config", "");
  m.seeds = doc.value("seeds", std::map<std::string, std::uint64_t>{});
  m.solver = doc.value("solver", nlohmann::json::object());
  m.output_dir = doc.at("output_dir").get<std::string>();
  m.timestamp = doc.at("timestamp").get<std::string>();
  m.artifacts = doc.value("artifacts", std::map<std::string, std::string>{});
  return m;
}

OutputDir::OutputDir(std::filesystem::path root) : root_(std::move(root)) {
  std::filesystem::create_directories(root_);
  if (std::filesystem::exists(root_ / "manifest.json")) {
    throw std::invalid_argument("output directory " + root_.string() + " already holds a run (manifest.json)");
  }
}

void OutputDir::write(const std::string& relative, std::string_view contents) {
  write_text_file(root_ / relative, contents);
  checksums_[relative] = sha256_hex(contents);
}

void OutputDir::write_json(const std::string& relative, const nlohmann::json& doc) { write(relative, dump_json(doc)); }

void OutputDir::finish(RunManifest manifest) {
  manifest.artifacts = checksums_;
  write_text_file(root_ / "manifest.json", dump_json(manifest.to_json()));
}

}  // namespace ccplan::cli
