// Acceptance battery: runs the full verification suite through the CLI,
// twice, and grades one line per criterion. Exits nonzero if any fail.
#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

// Setup plumbing only; criterion failures are counted, not fatal.
#define REQUIRE(cond, msg)                                              \
  do {                                                                  \
    if (!(cond)) {                                                      \
      std::fprintf(stderr, "[FATAL] %s:%d %s\n", __FILE__, __LINE__, msg); \
      std::exit(1);                                                     \
    }                                                                   \
  } while (0)

int failures = 0;

void grade(int idx, const std::string& name, bool ok, const std::string& measured) {
  std::printf("[%s] criterion %2d: %s  (%s)\n", ok ? "PASS" : "FAIL", idx,
              name.c_str(), measured.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// One CSV line; quoted fields may contain commas and doubled quotes.
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string strip_wall_time(const std::string& text) {
  std::istringstream in(text);
  std::string line, kept;
  while (std::getline(in, line))
    if (line.find("wall_time_seconds") == std::string::npos) kept += line + "\n";
  return kept;
}

std::map<std::string, fs::path> list_files(const fs::path& root) {
  std::map<std::string, fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file())
      out[fs::relative(e.path(), root).generic_string()] = e.path();
  return out;
}

// Byte identity of two run trees; manifests compared without the wall clock.
bool trees_match(const fs::path& a, const fs::path& b, std::string& why) {
  const auto fa = list_files(a);
  const auto fb = list_files(b);
  for (const auto& [rel, pa] : fa) {
    const auto it = fb.find(rel);
    if (it == fb.end()) {
      why = rel + " missing in second run";
      return false;
    }
    std::string xa = read_file(pa);
    std::string xb = read_file(it->second);
    if (fs::path(rel).filename() == "manifest.json") {
      xa = strip_wall_time(xa);
      xb = strip_wall_time(xb);
    }
    if (xa != xb) {
      why = rel + " differs between runs";
      return false;
    }
  }
  if (fb.size() != fa.size()) {
    why = "second run wrote extra files";
    return false;
  }
  if (fa.empty()) {
    why = "no outputs";
    return false;
  }
  return true;
}

int run_verify(const fs::path& scratch, const char* out_name, const char* log_name) {
  const std::string cmd = "cd \"" + scratch.string() + "\" && \"" +
                          JELLIUM_CLI_PATH + "\" run --config verify.cfg --out " +
                          out_name + " --serial > " + log_name + " 2>&1";
  const int status = std::system(cmd.c_str());
  if (status < 0 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

}  // namespace

int main() {
  const fs::path scratch = fs::temp_directory_path() / "jellium_acceptance";
  fs::remove_all(scratch);
  fs::create_directories(scratch);
  {
    std::ofstream cfg(scratch / "verify.cfg");
    cfg << "[experiment]\nkind = verify-all\nseed = 1\n";
  }
  std::printf("scratch: %s\n", scratch.c_str());

  std::printf("running the verification battery, first pass...\n");
  std::fflush(stdout);
  const int code_a = run_verify(scratch, "a", "run_a.log");
  REQUIRE(code_a == 0 || code_a == 1, "first verification run did not complete");

  std::printf("running the verification battery, second pass...\n");
  std::fflush(stdout);
  const int code_b = run_verify(scratch, "b", "run_b.log");
  REQUIRE(code_b == 0 || code_b == 1, "second verification run did not complete");

  const fs::path report = scratch / "a" / "verify_report.csv";
  REQUIRE(fs::exists(report), "verify_report.csv was not written");

  struct Row {
    std::string name, passed, measured;
  };
  std::map<int, Row> rows;
  {
    std::ifstream in(report);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const std::vector<std::string> f = split_csv(line);
      REQUIRE(f.size() == 5, "malformed verify_report.csv row");
      rows[std::atoi(f[0].c_str())] = {f[1], f[2], f[3]};
    }
  }
  REQUIRE(rows.size() == 16, "expected 16 rows in verify_report.csv");

  for (int i = 1; i <= 15; ++i) {
    const Row& r = rows.at(i);
    grade(i, r.name, r.passed == "true", r.measured);
  }

  // Criterion 16 also demands the two serial runs agree byte for byte.
  {
    const Row& r = rows.at(16);
    std::string why;
    const bool identical = trees_match(scratch / "a", scratch / "b", why);
    const bool ok = r.passed == "true" && identical;
    grade(16, r.name, ok, identical ? r.measured : r.measured + "; " + why);
  }

  if (failures == 0)
    std::printf("all 16 criteria passed\n");
  else
    std::printf("%d of 16 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
