#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace jellium {

// One declared check of an experiment run; the run exits nonzero if any fails.
struct Assertion {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ManifestInfo {
  std::string kind;
  std::string config_path;
  std::uint64_t seed = 0;
  bool serial = false;
  int threads = 1;
  nlohmann::ordered_json resolved;  // full resolved config, defaults included
  std::vector<std::string> outputs;
  std::vector<Assertion> assertions;
  double wall_seconds = 0.0;
};

// Deterministic except for the trailing wall_time_seconds field.
std::string manifest_to_json(const ManifestInfo& info);

// Writes <out_dir>/manifest.json.
void write_manifest(const std::string& out_dir, const ManifestInfo& info);

}  // namespace jellium
