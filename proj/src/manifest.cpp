#include "jellium/manifest.hpp"

#include <fftw3.h>

#include "jellium/csvio.hpp"

namespace jellium {

std::string manifest_to_json(const ManifestInfo& info) {
  nlohmann::ordered_json j;
  j["kind"] = info.kind;
  j["config_path"] = info.config_path;
  j["seed"] = info.seed;
  j["serial"] = info.serial;
  j["threads"] = info.threads;
  j["versions"] = nlohmann::ordered_json{{"jellium", "1.0.0"},
                                         {"compiler", __VERSION__},
                                         {"fftw", std::string(fftw_version)}};
  j["config"] = info.resolved;
  j["outputs"] = info.outputs;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const Assertion& a : info.assertions)
    checks.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
  j["assertions"] = checks;
  // Kept last: the determinism comparison strips this line.
  j["wall_time_seconds"] = info.wall_seconds;
  return j.dump(2) + "\n";
}

void write_manifest(const std::string& out_dir, const ManifestInfo& info) {
  write_text_file(out_dir + "/manifest.json", manifest_to_json(info));
}

}  // namespace jellium
