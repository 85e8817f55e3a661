#pragma once
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace jellium {

// Flat sectioned key-value text:
//   # comment (also ';'), blank lines ignored
//   [section]
//   key = value        (value runs to end of line, trimmed)
// Keys must appear inside a section; duplicates are errors. Values are kept
// verbatim; typed accessors parse on demand and report the key's location.
struct ConfigError : std::runtime_error {
  int line = 0;
  int column = 0;
  ConfigError(const std::string& what, int line_, int column_)
      : std::runtime_error(what), line(line_), column(column_) {}
};

class ConfigFile {
 public:
  struct Entry {
    std::string value;
    int line = 0;
    int column = 0;
  };

  static ConfigFile parse_text(const std::string& text);
  static ConfigFile parse_file(const std::string& path);

  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;

  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key,
                    double fallback) const;
  long get_long(const std::string& section, const std::string& key) const;
  long get_long(const std::string& section, const std::string& key,
                long fallback) const;
  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const;
  // Comma-separated list of numbers.
  std::vector<double> get_doubles(const std::string& section,
                                  const std::string& key) const;
  std::vector<double> get_doubles(const std::string& section,
                                  const std::string& key,
                                  const std::vector<double>& fallback) const;

  // Section contents in file order (for schema validation and manifests).
  std::vector<std::pair<std::string, Entry>> section_entries(
      const std::string& section) const;
  std::vector<std::string> section_names() const;

 private:
  const Entry* find(const std::string& section, const std::string& key) const;
  const Entry& require(const std::string& section, const std::string& key) const;

  // section -> ordered (key, entry) pairs
  std::map<std::string, std::vector<std::pair<std::string, Entry>>> sections_;
  std::vector<std::string> section_order_;
};

}  // namespace jellium
