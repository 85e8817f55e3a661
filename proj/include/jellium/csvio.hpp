#pragma once
#include <string>
#include <vector>

#include "jellium/grid.hpp"

namespace jellium {

// Shortest round-trip decimal form (to_chars), locale-independent.
std::string format_double(double v);

// One RFC-4180 record; fields are quoted only when they need it.
std::string csv_record(const std::vector<std::string>& fields);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string to_string() const;
};

// Grid field rendered as CSV with the 3-line grid header
//   # origin,<x>,<y>
//   # h,<h>
//   # nx ny,<nx>,<ny>
// followed by an ix,iy,value table (row-major, iy outer).
std::string field_to_csv(const ScalarField& f);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace jellium
