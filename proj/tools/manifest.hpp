#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace yamabe3h::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

struct RunManifest {
  std::string command;
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;
  nlohmann::json config;
  std::string status;
};

nlohmann::json to_json(const RunManifest& m);

// Writes <output>.manifest.json next to every output file. No timestamps, so
// identical runs give identical manifests.
void write_manifests(const RunManifest& m);

}  // namespace yamabe3h::cli
