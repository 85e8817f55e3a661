#pragma once
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "jellium/configfile.hpp"
#include "jellium/manifest.hpp"

namespace jellium {

struct RunContext {
  std::string out_dir = ".";
  bool serial = false;
  bool verbose = false;
  std::optional<std::uint64_t> seed_override;
  int threads = 1;
};

struct ExperimentResult {
  std::string kind;
  std::uint64_t seed = 0;
  nlohmann::ordered_json resolved;  // full config with defaults applied
  std::vector<std::string> outputs;
  std::vector<Assertion> assertions;

  bool all_passed() const;
};

// Kinds accepted by run and describe, in canonical order.
const std::vector<std::string>& experiment_kinds();
bool is_experiment_kind(const std::string& kind);

// Key/type/unit/default listing of one experiment's config section.
// Throws ConfigError (line 0) on unknown kind.
std::string describe_experiment(const std::string& kind);

// Runs one experiment, writing its CSV outputs into ctx.out_dir (created if
// missing). Throws ConfigError on malformed or unknown config content.
ExperimentResult run_experiment(const std::string& kind, const ConfigFile& cfg,
                                const RunContext& ctx);

}  // namespace jellium
