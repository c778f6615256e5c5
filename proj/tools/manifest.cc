#include "manifest.h"

#include <cstdio>
#include <ctime>

#include <json.hpp>

#include "cacer/random.h"
#include "cacer/standoff.h"

namespace cacer::cli {

std::uint64_t RunManifest::config_digest() const { return Fnv1a64(command + '\n' + config); }

std::string RunManifest::ToJson() const {
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - began).count();
  char digest[24];
  std::snprintf(digest, sizeof digest, "%016llx", static_cast<unsigned long long>(config_digest()));
  char stamp[32];
  const std::time_t now = std::time(nullptr);
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));

  nlohmann::ordered_json j;
  j["command"] = command;
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  j["config"] = config;
  j["config_digest"] = digest;
  j["seed"] = seed ? nlohmann::ordered_json(*seed) : nlohmann::ordered_json(nullptr);
  j["version"] = CACER_VERSION;
  j["exit_code"] = exit_code;
  j["finished_utc"] = stamp;
  j["elapsed_seconds"] = seconds;
  return j.dump(2) + "\n";
}

void RunManifest::Write(const std::filesystem::path &path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  WriteFile(path, ToJson());
}

}  // namespace cacer::cli
