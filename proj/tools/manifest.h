#ifndef CACER_TOOLS_MANIFEST_H_
#define CACER_TOOLS_MANIFEST_H_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace cacer::cli {

// Provenance record written next to every command's outputs.
struct RunManifest {
  std::string command;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string config;  // canonical flag string the digest is taken over
  std::optional<std::uint64_t> seed;
  int exit_code = 0;
  std::chrono::steady_clock::time_point began = std::chrono::steady_clock::now();

  std::uint64_t config_digest() const;
  std::string ToJson() const;
  void Write(const std::filesystem::path &path) const;
};

}  // namespace cacer::cli

#endif  // CACER_TOOLS_MANIFEST_H_
