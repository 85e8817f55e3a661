#include "jellium/config.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

#include "jellium/csvio.hpp"

namespace jellium {

PointConfiguration PointConfiguration::from_points(std::vector<Vec2> pts) {
  PointConfiguration c;
  c.multiplicities.assign(pts.size(), 1);
  c.points = std::move(pts);
  return c;
}

int PointConfiguration::total_multiplicity() const {
  int t = 0;
  for (int m : multiplicities) t += m;
  return t;
}

void PointConfiguration::validate() const {
  if (points.size() != multiplicities.size())
    throw std::invalid_argument("PointConfiguration: size mismatch");
  for (int m : multiplicities)
    if (m < 1) throw std::invalid_argument("PointConfiguration: multiplicity < 1");
}

void PlasmaHamiltonian::validate() const {
  if (!(beta > 0.0)) throw std::invalid_argument("PlasmaHamiltonian: beta <= 0");
  if (!(g > 0.0)) throw std::invalid_argument("PlasmaHamiltonian: g <= 0");
  for (const auto& hole : holes)
    if (!(hole.coefficient > 0.0))
      throw std::invalid_argument("PlasmaHamiltonian: hole coefficient <= 0");
}

std::string plasma_to_text(const PlasmaHamiltonian& h, const PointConfiguration& c) {
  c.validate();
  h.validate();
  std::string out = "plasma 1\n";
  out += "beta " + format_double(h.beta) + "\n";
  out += "g " + format_double(h.g) + "\n";
  out += "holes " + std::to_string(h.holes.size()) + "\n";
  for (const auto& hole : h.holes)
    out += format_double(hole.position.x) + " " + format_double(hole.position.y) +
           " " + format_double(hole.coefficient) + "\n";
  out += "points " + std::to_string(c.points.size()) + "\n";
  for (std::size_t i = 0; i < c.points.size(); ++i)
    out += format_double(c.points[i].x) + " " + format_double(c.points[i].y) + " " +
           std::to_string(c.multiplicities[i]) + "\n";
  return out;
}

namespace {

struct LineReader {
  std::istringstream in;
  int lineno = 0;
  explicit LineReader(const std::string& s) : in(s) {}

  std::string next() {
    std::string line;
    if (!std::getline(in, line)) fail("unexpected end of input");
    ++lineno;
    return line;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw std::runtime_error("plasma text line " + std::to_string(lineno + 1) +
                             ": " + msg);
  }
};

double parse_double_tok(LineReader& r, const std::string& tok) {
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
    r.fail("bad number '" + tok + "'");
  return v;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream ss(s);
  std::string t;
  while (ss >> t) out.push_back(t);
  return out;
}

}  // namespace

void plasma_from_text(const std::string& text, PlasmaHamiltonian& h,
                      PointConfiguration& c) {
  LineReader r(text);
  if (r.next() != "plasma 1") r.fail("expected header 'plasma 1'");

  auto keyed = [&](const std::string& key) {
    auto toks = split_ws(r.next());
    if (toks.size() != 2 || toks[0] != key) r.fail("expected '" + key + " <value>'");
    return toks[1];
  };

  h = PlasmaHamiltonian{};
  h.beta = parse_double_tok(r, keyed("beta"));
  h.g = parse_double_tok(r, keyed("g"));
  const long nholes = std::stol(keyed("holes"));
  h.holes.clear();
  for (long k = 0; k < nholes; ++k) {
    auto toks = split_ws(r.next());
    if (toks.size() != 3) r.fail("expected 'x y coefficient'");
    QuasiHole q;
    q.position = {parse_double_tok(r, toks[0]), parse_double_tok(r, toks[1])};
    q.coefficient = parse_double_tok(r, toks[2]);
    h.holes.push_back(q);
  }
  const long npts = std::stol(keyed("points"));
  c = PointConfiguration{};
  for (long i = 0; i < npts; ++i) {
    auto toks = split_ws(r.next());
    if (toks.size() != 3) r.fail("expected 'x y multiplicity'");
    c.points.push_back({parse_double_tok(r, toks[0]), parse_double_tok(r, toks[1])});
    c.multiplicities.push_back(static_cast<int>(std::stol(toks[2])));
  }
  c.validate();
  h.validate();
}

}  // namespace jellium
