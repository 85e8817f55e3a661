#include "jellium/csvio.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace jellium {

std::string format_double(double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

static bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\r\n") != std::string::npos;
}

std::string csv_record(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out += ',';
    if (needs_quoting(fields[i])) {
      out += '"';
      for (char c : fields[i]) {
        out += c;
        if (c == '"') out += '"';
      }
      out += '"';
    } else {
      out += fields[i];
    }
  }
  out += '\n';
  return out;
}

std::string CsvTable::to_string() const {
  std::string out = csv_record(header);
  for (const auto& r : rows) out += csv_record(r);
  return out;
}

std::string field_to_csv(const ScalarField& f) {
  std::string out;
  out += "# origin," + format_double(f.grid.origin.x) + "," +
         format_double(f.grid.origin.y) + "\n";
  out += "# h," + format_double(f.grid.h) + "\n";
  out += "# nx ny," + std::to_string(f.grid.nx) + "," + std::to_string(f.grid.ny) + "\n";
  out += "ix,iy,value\n";
  for (int iy = 0; iy < f.grid.ny; ++iy)
    for (int ix = 0; ix < f.grid.nx; ++ix)
      out += std::to_string(ix) + "," + std::to_string(iy) + "," +
             format_double(f.at(ix, iy)) + "\n";
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace jellium
