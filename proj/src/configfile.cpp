#include "jellium/configfile.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <string_view>

#include "jellium/csvio.hpp"

namespace jellium {

namespace {

std::string_view trim(std::string_view s, int& col_offset) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  col_offset += static_cast<int>(b);
  return s.substr(b, e - b);
}

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-')
      return false;
  return true;
}

double parse_double_at(std::string_view s, int line, int col) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e)
    throw ConfigError("expected a number, got '" + std::string(s) + "'", line,
                      col + static_cast<int>(p - b));
  return v;
}

}  // namespace

ConfigFile ConfigFile::parse_text(const std::string& text) {
  ConfigFile cfg;
  std::string current;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line(text.data() + pos,
                          (nl == std::string::npos ? text.size() : nl) - pos);
    pos = (nl == std::string::npos) ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    int col = 1;
    std::string_view s = trim(line, col);
    if (s.empty() || s.front() == '#' || s.front() == ';') continue;

    if (s.front() == '[') {
      if (s.back() != ']')
        throw ConfigError("unterminated section header", line_no,
                          col + static_cast<int>(s.size()) - 1);
      int ncol = col + 1;
      std::string_view name = trim(s.substr(1, s.size() - 2), ncol);
      if (!valid_name(name))
        throw ConfigError("invalid section name", line_no, ncol);
      current = std::string(name);
      if (!cfg.sections_.count(current)) {
        cfg.sections_[current] = {};
        cfg.section_order_.push_back(current);
      }
      continue;
    }

    const std::size_t eq = s.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("expected 'key = value'", line_no, col);
    int kcol = col;
    std::string_view key = trim(s.substr(0, eq), kcol);
    if (!valid_name(key))
      throw ConfigError("invalid key name", line_no, kcol);
    if (current.empty())
      throw ConfigError("key outside any [section]", line_no, kcol);
    int vcol = col + static_cast<int>(eq) + 1;
    std::string_view value = trim(s.substr(eq + 1), vcol);

    auto& entries = cfg.sections_[current];
    const std::string key_str(key);
    const bool dup =
        std::any_of(entries.begin(), entries.end(),
                    [&](const auto& kv) { return kv.first == key_str; });
    if (dup)
      throw ConfigError("duplicate key '" + key_str + "' in [" + current + "]",
                        line_no, kcol);
    entries.emplace_back(key_str, Entry{std::string(value), line_no, vcol});
  }
  return cfg;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
  return parse_text(read_text_file(path));
}

bool ConfigFile::has_section(const std::string& section) const {
  return sections_.count(section) != 0;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

const ConfigFile::Entry* ConfigFile::find(const std::string& section,
                                          const std::string& key) const {
  auto it = sections_.find(section);
  if (it == sections_.end()) return nullptr;
  for (const auto& kv : it->second)
    if (kv.first == key) return &kv.second;
  return nullptr;
}

const ConfigFile::Entry& ConfigFile::require(const std::string& section,
                                             const std::string& key) const {
  const Entry* e = find(section, key);
  if (!e)
    throw ConfigError("missing key '" + key + "' in [" + section + "]", 0, 0);
  return *e;
}

std::string ConfigFile::get_string(const std::string& section,
                                   const std::string& key) const {
  return require(section, key).value;
}

std::string ConfigFile::get_string(const std::string& section,
                                   const std::string& key,
                                   const std::string& fallback) const {
  const Entry* e = find(section, key);
  return e ? e->value : fallback;
}

double ConfigFile::get_double(const std::string& section,
                              const std::string& key) const {
  const Entry& e = require(section, key);
  return parse_double_at(e.value, e.line, e.column);
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
  const Entry* e = find(section, key);
  return e ? parse_double_at(e->value, e->line, e->column) : fallback;
}

long ConfigFile::get_long(const std::string& section,
                          const std::string& key) const {
  const Entry& e = require(section, key);
  long v = 0;
  auto [p, ec] = std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
  if (ec != std::errc() || p != e.value.data() + e.value.size())
    throw ConfigError("expected an integer, got '" + e.value + "'", e.line,
                      e.column);
  return v;
}

long ConfigFile::get_long(const std::string& section, const std::string& key,
                          long fallback) const {
  return find(section, key) ? get_long(section, key) : fallback;
}

std::uint64_t ConfigFile::get_u64(const std::string& section,
                                  const std::string& key,
                                  std::uint64_t fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
  if (ec != std::errc() || p != e->value.data() + e->value.size())
    throw ConfigError("expected an unsigned integer, got '" + e->value + "'",
                      e->line, e->column);
  return v;
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          bool fallback) const {
  const Entry* e = find(section, key);
  if (!e) return fallback;
  if (e->value == "true" || e->value == "1" || e->value == "yes") return true;
  if (e->value == "false" || e->value == "0" || e->value == "no") return false;
  throw ConfigError("expected a boolean, got '" + e->value + "'", e->line,
                    e->column);
}

std::vector<double> ConfigFile::get_doubles(const std::string& section,
                                            const std::string& key) const {
  const Entry& e = require(section, key);
  std::vector<double> out;
  std::size_t start = 0;
  const std::string& v = e.value;
  while (start <= v.size()) {
    std::size_t comma = v.find(',', start);
    if (comma == std::string::npos) comma = v.size();
    int col = e.column + static_cast<int>(start);
    std::string_view item = trim(std::string_view(v).substr(start, comma - start), col);
    if (item.empty())
      throw ConfigError("empty list element", e.line, col);
    out.push_back(parse_double_at(item, e.line, col));
    start = comma + 1;
    if (comma == v.size()) break;
  }
  return out;
}

std::vector<double> ConfigFile::get_doubles(
    const std::string& section, const std::string& key,
    const std::vector<double>& fallback) const {
  return find(section, key) ? get_doubles(section, key) : fallback;
}

std::vector<std::pair<std::string, ConfigFile::Entry>> ConfigFile::section_entries(
    const std::string& section) const {
  auto it = sections_.find(section);
  if (it == sections_.end()) return {};
  return it->second;
}

std::vector<std::string> ConfigFile::section_names() const {
  return section_order_;
}

}  // namespace jellium
