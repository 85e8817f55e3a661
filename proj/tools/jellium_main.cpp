#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "jellium/configfile.hpp"
#include "jellium/experiments.hpp"
#include "jellium/manifest.hpp"

namespace {

int default_threads() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  n = std::min(n, 8);
  if (const char* env = std::getenv("JELLIUM_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end && *end == '\0' && cap > 0) n = std::min<long>(n, cap);
  }
  return n;
}

void print_config_error(const jellium::ConfigError& e) {
  if (e.line > 0)
    std::fprintf(stderr, "error: line %d, column %d: %s\n", e.line, e.column,
                 e.what());
  else
    std::fprintf(stderr, "error: %s\n", e.what());
}

int run_command(const std::string& config_path, const std::string& out_dir,
                bool serial, bool verbose, bool have_seed, std::uint64_t seed) {
  jellium::RunContext ctx;
  ctx.out_dir = out_dir;
  ctx.serial = serial;
  ctx.verbose = verbose;
  ctx.threads = serial ? 1 : default_threads();
  if (have_seed) ctx.seed_override = seed;

  jellium::ExperimentResult res;
  std::string kind;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const jellium::ConfigFile cfg = jellium::ConfigFile::parse_file(config_path);
    kind = cfg.get_string("experiment", "kind");
    res = jellium::run_experiment(kind, cfg, ctx);
  } catch (const jellium::ConfigError& e) {
    print_config_error(e);
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  jellium::ManifestInfo info;
  info.kind = res.kind;
  info.config_path = config_path;
  info.seed = res.seed;
  info.serial = serial;
  info.threads = ctx.threads;
  info.resolved = res.resolved;
  info.outputs = res.outputs;
  info.assertions = res.assertions;
  info.wall_seconds = wall;
  jellium::write_manifest(ctx.out_dir, info);

  std::string failing;
  for (const jellium::Assertion& a : res.assertions) {
    std::printf("%s  %s%s%s\n", a.passed ? "[pass]" : "[FAIL]", a.name.c_str(),
                a.detail.empty() ? "" : "  ", a.detail.c_str());
    if (!a.passed) failing += (failing.empty() ? "" : ", ") + a.name;
  }
  if (!failing.empty()) {
    std::fprintf(stderr, "failed assertions: %s\n", failing.c_str());
    return 1;
  }
  std::printf("ok: %zu assertions passed (%.1fs), outputs in %s\n",
              res.assertions.size(), wall, ctx.out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-dimensional jellium laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", kind;
  bool serial = false, verbose = false;
  std::uint64_t seed = 0;

  CLI::App* run = app.add_subcommand("run", "run one experiment from a config file");
  run->add_option("--config", config_path, "experiment config file")
      ->required();
  run->add_option("--out", out_dir, "output directory (created if missing)");
  run->add_flag("--serial", serial, "single-threaded, bitwise reproducible");
  CLI::Option* seed_opt =
      run->add_option("--seed", seed, "override the config seed");
  run->add_flag("--verbose", verbose, "progress notes on stderr");

  CLI::App* describe =
      app.add_subcommand("describe", "print an experiment's config schema");
  describe->add_option("kind", kind, "experiment kind")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (describe->parsed()) {
    try {
      std::printf("%s", jellium::describe_experiment(kind).c_str());
    } catch (const jellium::ConfigError& e) {
      print_config_error(e);
      return 2;
    }
    return 0;
  }
  return run_command(config_path, out_dir, serial, verbose,
                     seed_opt->count() > 0, seed);
}
