#pragma once

#include <map>
#include <string>

namespace surprise {

constexpr const char* kLibraryVersion = "0.1.0";

/// Hex SHA-256 of a file's bytes.
std::string file_sha256(const std::string& path);

/**
 * Reproducibility record for one CLI run: the effective configuration,
 * library version, seed, timestamps and a digest per emitted file.
 * Serialized as JSON next to the outputs.
 */
struct RunManifest {
  std::string command;
  std::map<std::string, std::string> config;
  std::uint64_t seed = 0;
  std::string started_at;
  std::string finished_at;
  std::map<std::string, std::string> output_digests;

  void add_output(const std::string& path);
  void write(const std::string& path) const;
};

std::string timestamp_utc();

}  // namespace surprise
