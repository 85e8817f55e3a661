#include "jellium/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "jellium/analysis.hpp"
#include "jellium/balayage.hpp"
#include "jellium/csvio.hpp"
#include "jellium/density.hpp"
#include "jellium/hamiltonian.hpp"
#include "jellium/meanfield.hpp"
#include "jellium/minimize.hpp"
#include "jellium/renorm.hpp"
#include "jellium/rng.hpp"
#include "jellium/sampler.hpp"
#include "jellium/thermo.hpp"
#include "jellium/verify.hpp"

namespace jellium {

namespace {

struct KeyDesc {
  const char* key;
  const char* type;  // int | float | floats | string | bool
  const char* unit;
  const char* def;   // nullptr: required
  const char* what;
};

struct Schema {
  const char* kind;
  std::vector<KeyDesc> keys;
};

const std::vector<Schema>& schemas() {
  static const std::vector<Schema> s = {
      {"ground-state",
       {{"n", "int", "count", "16", "number of mobile charges"},
        {"beta", "float", "1", "1.5707963267948966", "confinement coefficient"},
        {"g", "float", "1", "1", "pair coupling"},
        {"holes_x", "floats", "length", "", "fixed-charge x positions"},
        {"holes_y", "floats", "length", "", "fixed-charge y positions"},
        {"holes_coeff", "floats", "1", "", "fixed-charge coefficients (default 2 each)"},
        {"multistarts", "int", "count", "8", "independent descent starts"},
        {"max_iterations", "int", "count", "200000", "descent iteration cap"},
        {"tolerance", "float", "1", "1e-8", "relative gradient-norm stop"},
        {"bulk_margin", "float", "length", "0.5641895835477563",
         "hull-distance cutoff for bulk points"}}},
      {"sample",
       {{"n", "int", "count", "64", "number of mobile charges"},
        {"beta", "float", "1", "1.5707963267948966", "confinement coefficient"},
        {"g", "float", "1", "1", "pair coupling"},
        {"holes_x", "floats", "length", "", "fixed-charge x positions"},
        {"holes_y", "floats", "length", "", "fixed-charge y positions"},
        {"holes_coeff", "floats", "1", "", "fixed-charge coefficients (default 2 each)"},
        {"temperature", "float", "1", "1", "Gibbs temperature"},
        {"sweeps", "int", "count", "20000", "total sweeps (N moves each)"},
        {"burnin", "float", "1", "0.2", "fraction of sweeps discarded"},
        {"thinning_sweeps", "float", "count", "1", "sweeps between samples"},
        {"step", "float", "length", "1", "initial proposal width"},
        {"grid_half", "float", "length", "0", "histogram half side (0: auto)"},
        {"grid_cells", "int", "count", "64", "histogram cells per side"},
        {"batches", "int", "count", "20", "error-bar batches"}}},
      {"balayage",
       {{"points_x", "floats", "length", nullptr, "charge x positions"},
        {"points_y", "floats", "length", nullptr, "charge y positions"},
        {"mult", "floats", "count", "", "charge multiplicities (default 1 each)"},
        {"h", "float", "length", "0.02", "grid spacing"},
        {"omega", "float", "1", "1.9", "projected SOR relaxation"},
        {"tol", "float", "1", "1e-8", "complementarity residual stop"},
        {"max_sweeps", "int", "count", "200000", "SOR sweep cap"},
        {"padding", "float", "length", "0.5", "extra box margin"}}},
      {"exclusion",
       {{"n", "int", "count", "64", "minimizer size"},
        {"subsets", "int", "count", "50", "random subsets tested"},
        {"subset_max", "int", "count", "12", "largest subset size"},
        {"h", "float", "length", "0.02", "screening grid spacing"},
        {"multistarts", "int", "count", "8", "descent starts for the minimizer"},
        {"tolerance", "float", "1", "1e-8", "relative gradient-norm stop"},
        {"max_iterations", "int", "count", "200000", "descent iteration cap"}}},
      {"meanfield",
       {{"potential", "string", "", "quadratic", "external potential family"},
        {"coefficient", "float", "1", "0.25", "potential coefficient c in c|x|^2"},
        {"mass", "float", "1", "1", "total density mass"},
        {"grid_half", "float", "length", "2.2", "grid half side"},
        {"grid_cells", "int", "count", "192", "cells per side"},
        {"mass_tol", "float", "1", "1e-9", "relative mass stop for bisection"},
        {"lcp_omega", "float", "1", "1.9", "projected SOR relaxation"},
        {"lcp_tol", "float", "1", "1e-10", "complementarity residual stop"},
        {"max_sweeps", "int", "count", "200000", "SOR sweep cap"}}},
      {"flocking",
       {{"potential", "string", "", "quadratic", "external potential family"},
        {"coefficient", "float", "1", "1", "potential coefficient c in c|x|^2"},
        {"rho_max", "float", "length^-2", "0.15915494309189535", "density ceiling"},
        {"mass", "float", "1", "10", "total density mass"},
        {"lambda", "float", "1", "0", "interaction coupling"},
        {"w", "string", "", "gaussian", "interaction kernel family"},
        {"w_amplitude", "float", "1", "1", "kernel amplitude"},
        {"w_width", "float", "length", "1", "kernel width"},
        {"grid_half", "float", "length", "6", "grid half side"},
        {"grid_cells", "int", "count", "192", "cells per side"},
        {"max_iterations", "int", "count", "2000", "projected-gradient cap"},
        {"tolerance", "float", "1", "1e-6", "projected-gradient norm stop"}}},
      {"thermo-scan",
       {{"lengths", "floats", "length", "4,8,16", "square sides"},
        {"rho", "float", "length^-2", "1", "background density"},
        {"shapes", "string", "", "both", "square | both (adds matched-area disk)"},
        {"multistarts", "int", "count", "4", "extra random starts per size"},
        {"tolerance", "float", "1", "1e-6", "relative gradient-norm stop"},
        {"max_iterations", "int", "count", "200000", "descent iteration cap"}}},
      {"renorm-energy",
       {{"lattice", "int", "count", "10", "points per side of the square lattice"},
        {"box", "float", "length", "0", "periodic box side (0: lattice spacing 1)"},
        {"etas", "floats", "length", "0.4,0.2,0.1", "smearing radii, halving"},
        {"cells_per_eta", "int", "count", "8", "grid cells per eta"},
        {"profile", "string", "", "tent", "smearing profile"}}},
      {"verify-all", {}},
  };
  return s;
}

const Schema& schema_for(const std::string& kind) {
  for (const Schema& s : schemas())
    if (kind == s.kind) return s;
  throw ConfigError("unknown experiment kind '" + kind + "'", 0, 0);
}

const KeyDesc& key_desc(const Schema& s, const std::string& key) {
  for (const KeyDesc& k : s.keys)
    if (key == k.key) return k;
  throw std::logic_error("schema lookup: " + key);
}

std::vector<double> parse_list_literal(const char* text) {
  std::vector<double> out;
  std::string s(text);
  std::size_t start = 0;
  while (start < s.size()) {
    std::size_t comma = s.find(',', start);
    if (comma == std::string::npos) comma = s.size();
    double v = 0.0;
    std::from_chars(s.data() + start, s.data() + comma, v);
    out.push_back(v);
    start = comma + 1;
  }
  return out;
}

std::string join_doubles(const std::vector<double>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += format_double(xs[i]);
  }
  return out;
}

// Typed, schema-checked view of one experiment's section. Every read lands in
// the resolved-config object so the manifest shows the exact values used.
class Reader {
 public:
  Reader(const ConfigFile& cfg, const Schema& schema,
         nlohmann::ordered_json& resolved)
      : cfg_(cfg), schema_(schema), resolved_(resolved) {
    for (const auto& [key, entry] : cfg.section_entries(schema.kind)) {
      const bool known = std::any_of(
          schema.keys.begin(), schema.keys.end(),
          [&](const KeyDesc& k) { return key == k.key; });
      if (!known)
        throw ConfigError("unknown key '" + key + "' in [" +
                              std::string(schema.kind) + "]",
                          entry.line, entry.column);
    }
  }

  double dbl(const std::string& key) {
    const KeyDesc& d = desc(key);
    double fallback = 0.0;
    std::from_chars(d.def, d.def + std::string(d.def).size(), fallback);
    const double v = cfg_.get_double(schema_.kind, key, fallback);
    resolved_[key] = format_double(v);
    return v;
  }
  long lng(const std::string& key) {
    const KeyDesc& d = desc(key);
    long fallback = std::strtol(d.def, nullptr, 10);
    const long v = cfg_.get_long(schema_.kind, key, fallback);
    resolved_[key] = v;
    return v;
  }
  std::string str(const std::string& key) {
    const KeyDesc& d = desc(key);
    const std::string v = cfg_.get_string(schema_.kind, key, d.def);
    resolved_[key] = v;
    return v;
  }
  std::vector<double> list(const std::string& key) {
    const KeyDesc& d = desc(key);
    std::vector<double> v;
    if (d.def == nullptr) {
      v = cfg_.get_doubles(schema_.kind, key);  // required
    } else {
      v = cfg_.get_doubles(schema_.kind, key, parse_list_literal(d.def));
    }
    resolved_[key] = join_doubles(v);
    return v;
  }

 private:
  const KeyDesc& desc(const std::string& key) const {
    return key_desc(schema_, key);
  }
  const ConfigFile& cfg_;
  const Schema& schema_;
  nlohmann::ordered_json& resolved_;
};

std::vector<QuasiHole> read_holes(Reader& r) {
  const std::vector<double> xs = r.list("holes_x");
  const std::vector<double> ys = r.list("holes_y");
  std::vector<double> cs = r.list("holes_coeff");
  if (xs.size() != ys.size())
    throw ConfigError("holes_x and holes_y have different lengths", 0, 0);
  if (cs.empty()) cs.assign(xs.size(), 2.0);
  if (cs.size() != xs.size())
    throw ConfigError("holes_coeff length does not match holes_x", 0, 0);
  std::vector<QuasiHole> holes;
  for (std::size_t i = 0; i < xs.size(); ++i)
    holes.push_back({{xs[i], ys[i]}, cs[i]});
  return holes;
}

void emit(ExperimentResult& res, const RunContext& ctx, const std::string& name,
          const std::string& content) {
  write_text_file(ctx.out_dir + "/" + name, content);
  res.outputs.push_back(name);
}

void assert_that(ExperimentResult& res, const std::string& name, bool passed,
                 const std::string& detail) {
  res.assertions.push_back({name, passed, detail});
}

CsvTable kv_table() {
  CsvTable t;
  t.header = {"key", "value"};
  return t;
}

void kv(CsvTable& t, const std::string& key, const std::string& value) {
  t.rows.push_back({key, value});
}
void kv(CsvTable& t, const std::string& key, double value) {
  kv(t, key, format_double(value));
}
void kv(CsvTable& t, const std::string& key, long value) {
  kv(t, key, std::to_string(value));
}
void kv(CsvTable& t, const std::string& key, bool value) {
  kv(t, key, std::string(value ? "true" : "false"));
}

ScalarField quadratic_potential(double half, long cells, double coeff) {
  const double h = 2.0 * half / static_cast<double>(cells);
  ScalarField v(GridSpec::centered_square(half, h));
  for (int iy = 0; iy < v.grid.ny; ++iy)
    for (int ix = 0; ix < v.grid.nx; ++ix) {
      const Vec2 p = v.grid.center(ix, iy);
      v.at(ix, iy) = coeff * norm2(p);
    }
  return v;
}

// ---------------------------------------------------------------------------

ExperimentResult run_ground_state(const ConfigFile& cfg, const RunContext& ctx,
                                  std::uint64_t seed) {
  ExperimentResult res;
  nlohmann::ordered_json& section = res.resolved["ground-state"];
  Reader r(cfg, schema_for("ground-state"), section);

  PlasmaHamiltonian h;
  const long n = r.lng("n");
  h.beta = r.dbl("beta");
  h.g = r.dbl("g");
  h.holes = read_holes(r);
  h.validate();

  MinimizeOptions opts;
  opts.multistart_runs = static_cast<int>(r.lng("multistarts"));
  opts.max_iterations = static_cast<int>(r.lng("max_iterations"));
  opts.gradient_tolerance = r.dbl("tolerance");
  const double margin = r.dbl("bulk_margin");
  opts.seed = seed;
  opts.threads = ctx.serial ? 1 : ctx.threads;

  const MinimizeResult m = multistart_minimize(h, static_cast<int>(n), opts);
  const SeparationReport sep = min_pair_distance(m.points, margin, 0.0);

  CsvTable pts;
  pts.header = {"x", "y"};
  for (const Vec2& p : m.points)
    pts.rows.push_back({format_double(p.x), format_double(p.y)});
  emit(res, ctx, "points.csv", pts.to_string());

  CsvTable s = kv_table();
  kv(s, "n", n);
  kv(s, "energy", m.energy);
  kv(s, "gradient_norm", m.gradient_norm);
  kv(s, "iterations", static_cast<long>(m.iterations));
  kv(s, "best_run", static_cast<long>(m.best_run));
  kv(s, "converged", m.converged);
  kv(s, "background_density", h.background_density());
  kv(s, "bulk_margin", margin);
  kv(s, "bulk_count", static_cast<long>(sep.bulk_count));
  kv(s, "min_bulk_separation", sep.min_bulk_distance);
  emit(res, ctx, "summary.csv", s.to_string());

  assert_that(res, "descent-converged", m.converged,
              "gradient_norm=" + format_double(m.gradient_norm));
  return res;
}

ExperimentResult run_sample(const ConfigFile& cfg, const RunContext& ctx,
                            std::uint64_t seed) {
  ExperimentResult res;
  nlohmann::ordered_json& section = res.resolved["sample"];
  Reader r(cfg, schema_for("sample"), section);

  PlasmaHamiltonian h;
  const long n = r.lng("n");
  h.beta = r.dbl("beta");
  h.g = r.dbl("g");
  h.holes = read_holes(r);
  h.validate();

  MetropolisOptions mo;
  mo.temperature = r.dbl("temperature");
  mo.sweeps = r.lng("sweeps");
  mo.burnin_fraction = r.dbl("burnin");
  const double thin = r.dbl("thinning_sweeps");
  mo.thinning_moves = std::max<long>(1, std::lround(thin * static_cast<double>(n)));
  mo.initial_step = r.dbl("step");
  mo.seed = seed;

  double half = r.dbl("grid_half");
  const long cells = r.lng("grid_cells");
  const long batches = r.lng("batches");
  if (half <= 0.0)
    half = 1.3 * std::sqrt(static_cast<double>(n) /
                           (M_PI * h.background_density()));
  section["grid_half"] = format_double(half);  // final value, manifest truth

  const GridSpec grid =
      GridSpec::centered_square(half, 2.0 * half / static_cast<double>(cells));
  const long post = mo.sweeps - static_cast<long>(mo.burnin_fraction * mo.sweeps);
  const long expected =
      std::max<long>(batches, post * n / std::max<long>(1, mo.thinning_moves));
  DensityEstimate est(grid, 1, expected, static_cast<int>(batches));

  const ChainStats stats = run_metropolis(
      h, static_cast<int>(n), mo,
      [&](const std::vector<Vec2>& pts) { est.add_sample(pts); });

  emit(res, ctx, "density.csv", field_to_csv(est.density()));
  emit(res, ctx, "density_se.csv", field_to_csv(est.standard_error()));

  CsvTable c = kv_table();
  kv(c, "n", n);
  kv(c, "acceptance", stats.acceptance);
  kv(c, "step", stats.step);
  kv(c, "samples", stats.samples);
  kv(c, "max_energy_drift", stats.max_energy_drift);
  kv(c, "drift_ok", stats.drift_ok);
  kv(c, "final_energy", stats.final_energy);
  kv(c, "histogram_mass", est.integral());
  emit(res, ctx, "chain.csv", c.to_string());

  section["assertion_constants"] =
      nlohmann::ordered_json{{"drift_bound", "1e-8"},
                             {"acceptance_window", "0.05,0.95"}};
  assert_that(res, "incremental-energy-audit", stats.drift_ok,
              "max_drift=" + format_double(stats.max_energy_drift));
  assert_that(res, "acceptance-window",
              stats.acceptance >= 0.05 && stats.acceptance <= 0.95,
              "acceptance=" + format_double(stats.acceptance));
  return res;
}

ExperimentResult run_balayage(const ConfigFile& cfg, const RunContext& ctx,
                              std::uint64_t) {
  ExperimentResult res;
  nlohmann::ordered_json& section = res.resolved["balayage"];
  Reader r(cfg, schema_for("balayage"), section);

  const std::vector<double> xs = r.list("points_x");
  const std::vector<double> ys = r.list("points_y");
  std::vector<double> ms = r.list("mult");
  if (xs.size() != ys.size() || xs.empty())
    throw ConfigError("points_x and points_y must be nonempty, equal-length", 0, 0);
  if (ms.empty()) ms.assign(xs.size(), 1.0);
  if (ms.size() != xs.size())
    throw ConfigError("mult length does not match points_x", 0, 0);

  PointConfiguration c;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    c.points.push_back({xs[i], ys[i]});
    c.multiplicities.push_back(static_cast<int>(std::lround(ms[i])));
  }
  c.validate();

  BalayageOptions opts;
  opts.h = r.dbl("h");
  opts.lcp.omega = r.dbl("omega");
  opts.lcp.tol = r.dbl("tol");
  opts.lcp.max_sweeps = static_cast<int>(r.lng("max_sweeps"));
  opts.box_padding = r.dbl("padding");

  const BalayageSolution sol = partial_balayage(c, opts);
  const double K = c.total_multiplicity();
  const double area_err = std::fabs(sol.area - K) / K;
  const double exterior = exterior_max_ratio(sol);
  const DiskCoverReport cover = union_of_disks_diagnostic(sol);

  emit(res, ctx, "phi.csv", field_to_csv(sol.phi));
  emit(res, ctx, "sigma.csv", field_to_csv(sol.sigma));

  CsvTable b;
  b.header = {"poly", "x", "y"};
  const auto polys = region_boundary(sol);
  for (std::size_t p = 0; p < polys.size(); ++p)
    for (const Vec2& v : polys[p])
      b.rows.push_back({std::to_string(p), format_double(v.x), format_double(v.y)});
  emit(res, ctx, "boundary.csv", b.to_string());

  CsvTable d;
  d.header = {"cx", "cy", "radius"};
  for (std::size_t i = 0; i < cover.centers.size(); ++i)
    d.rows.push_back({format_double(cover.centers[i].x),
                      format_double(cover.centers[i].y),
                      format_double(cover.radii[i])});
  emit(res, ctx, "disks.csv", d.to_string());

  CsvTable s = kv_table();
  kv(s, "mass", K);
  kv(s, "area", sol.area);
  kv(s, "area_error_rel", area_err);
  kv(s, "support_radius", sol.support_radius);
  kv(s, "residual", sol.residual);
  kv(s, "sweeps", static_cast<long>(sol.sweeps));
  kv(s, "enlargements", static_cast<long>(sol.enlargements));
  kv(s, "converged", sol.converged);
  kv(s, "exterior_ratio", exterior);
  kv(s, "uncovered_fraction", cover.uncovered_fraction);
  kv(s, "tf_energy", tf_energy(sol));
  emit(res, ctx, "summary.csv", s.to_string());

  const double area_tol = opts.h <= 0.02 ? 0.01 : 0.025;
  section["assertion_constants"] = nlohmann::ordered_json{
      {"area_tolerance_rel", format_double(area_tol)},
      {"exterior_bound_rel", "0.001"},
      {"dilation_cells", 2}};
  assert_that(res, "solver-converged", sol.converged,
              "residual=" + format_double(sol.residual));
  assert_that(res, "region-mass-match", area_err <= area_tol,
              "area_error_rel=" + format_double(area_err));
  assert_that(res, "exterior-potential-vanishes", exterior <= 1e-3,
              "exterior_ratio=" + format_double(exterior));
  return res;
}

ExperimentResult run_exclusion(const ConfigFile& cfg, const RunContext& ctx,
                               std::uint64_t seed) {
  ExperimentResult res;
  nlohmann::ordered_json& section = res.resolved["exclusion"];
  Reader r(cfg, schema_for("exclusion"), section);

  const long n = r.lng("n");
  const long subsets = r.lng("subsets");
  const long subset_max = r.lng("subset_max");

  PlasmaHamiltonian h;
  MinimizeOptions mopts;
  mopts.multistart_runs = static_cast<int>(r.lng("multistarts"));
  mopts.gradient_tolerance = r.dbl("tolerance");
  mopts.max_iterations = static_cast<int>(r.lng("max_iterations"));
  mopts.seed = seed;
  mopts.threads = ctx.serial ? 1 : ctx.threads;
  const MinimizeResult m = multistart_minimize(h, static_cast<int>(n), mopts);

  BalayageOptions bopts;
  bopts.h = r.dbl("h");

  PointConfiguration c = PointConfiguration::from_points(m.points);
  Rng rng(derive_seed(seed, 4001));
  CsvTable t;
  t.header = {"subset", "size", "area", "violations"};
  long total_violations = 0;
  for (long s = 0; s < subsets; ++s) {
    const std::size_t size =
        1 + static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(subset_max)));
    std::vector<std::size_t> idx(c.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    for (std::size_t i = 0; i < size; ++i) {
      const std::size_t j =
          i + static_cast<std::size_t>(rng.below(idx.size() - i));
      std::swap(idx[i], idx[j]);
    }
    idx.resize(size);
    std::sort(idx.begin(), idx.end());
    const ExclusionReport rep = exclusion_check(c, idx, bopts);
    total_violations += static_cast<long>(rep.violations.size());
    t.rows.push_back({std::to_string(s), std::to_string(size),
                      format_double(rep.area),
                      std::to_string(rep.violations.size())});
  }
  emit(res, ctx, "subsets.csv", t.to_string());

  CsvTable s = kv_table();
  kv(s, "n", n);
  kv(s, "minimizer_energy", m.energy);
  kv(s, "minimizer_converged", m.converged);
  kv(s, "subsets", subsets);
  kv(s, "total_violations", total_violations);
  emit(res, ctx, "summary.csv", s.to_string());

  assert_that(res, "minimizer-converged", m.converged,
              "gradient_norm=" + format_double(m.gradient_norm));
  assert_that(res, "no-exclusion-violations", total_violations == 0,
              "total_violations=" + std::to_string(total_violations));
  return res;
}

ExperimentResult run_meanfield(const ConfigFile& cfg, const RunContext& ctx,
                               std::uint64_t) {
  ExperimentResult res;
  nlohmann::ordered_json& section = res.resolved["meanfield"];
  Reader r(cfg, schema_for("meanfield"), section);

  const std::string pot = r.str("potential");
  if (pot != "quadratic")
    throw ConfigError("unsupported potential '" + pot + "'", 0, 0);
  const double coeff = r.dbl("coefficient");
  const double mass = r.dbl("mass");
  const double half = r.dbl("grid_half");
  const long cells = r.lng("grid_cells");

  EquilibriumOptions opts;
  opts.mass_tol = r.dbl("mass_tol");
  opts.lcp.omega = r.dbl("lcp_omega");
  opts.lcp.tol = r.dbl("lcp_tol");
  opts.lcp.max_sweeps = static_cast<int>(r.lng("max_sweeps"));

  const ScalarField v = quadratic_potential(half, cells, coeff);
  const EquilibriumResult eq = meanfield_equilibrium(v, mass, opts);

  emit(res, ctx, "density.csv", field_to_csv(eq.density));

  const GridSpec& g = eq.density.grid;
  const double cell = g.h * g.h;
  double total = 0.0, height = 0.0, min_rho = 0.0, support_area = 0.0;
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      const double rho = eq.density.at(ix, iy);
      total += rho * cell;
      height = std::max(height, rho);
      min_rho = std::min(min_rho, rho);
      if (rho > 0.0) support_area += cell;
    }

  // Interior balance 2 pi rho = Lap v, one full stencil inside the support;
  // needs the completed total so the density scale is the solved mass.
  double consistency = 0.0;
  for (int iy = 1; iy < g.ny - 1; ++iy) {
    for (int ix = 1; ix < g.nx - 1; ++ix) {
      const double rho = eq.density.at(ix, iy);
      bool deep = rho > 0.0;
      for (int dy = -1; dy <= 1 && deep; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
          if (eq.density.at(ix + dx, iy + dy) <= 0.0) {
            deep = false;
            break;
          }
      if (deep) {
        const double lap = (v.at(ix - 1, iy) + v.at(ix + 1, iy) + v.at(ix, iy - 1) +
                            v.at(ix, iy + 1) - 4.0 * v.at(ix, iy)) /
                           cell;
        consistency = std::max(consistency,
                               std::fabs(2.0 * M_PI * rho * (mass / total) - lap));
      }
    }
  }

  const double height_theory = 2.0 * coeff / M_PI;
  const double radius_theory = std::sqrt(mass / (2.0 * coeff));
  const double radius = std::sqrt(support_area / M_PI);

  CsvTable s = kv_table();
  kv(s, "mu", eq.mu);
  kv(s, "bisections", static_cast<long>(eq.bisections));
  kv(s, "mass_error_pre_rescale", eq.mass_error);
  kv(s, "total_mass", total);
  kv(s, "height_max", height);
  kv(s, "height_uniform_theory", height_theory);
  kv(s, "support_area", support_area);
  kv(s, "support_radius", radius);
  kv(s, "support_radius_theory", radius_theory);
  kv(s, "flat_interior_defect", consistency);
  kv(s, "converged", eq.converged);
  emit(res, ctx, "summary.csv", s.to_string());

  section["assertion_constants"] = nlohmann::ordered_json{
      {"mass_rel_tol", "1e-10"},
      {"radius_rel_tol", "0.02"},
      {"flat_interior_tol", "1e-8"}};
  assert_that(res, "bisection-converged", eq.converged,
              "mass_error=" + format_double(eq.mass_error));
  assert_that(res, "unit-mass", std::fabs(total - mass) <= 1e-10 * mass,
              "total=" + format_double(total));
  assert_that(res, "nonnegative-density", min_rho >= 0.0,
              "min=" + format_double(min_rho));
  assert_that(res, "disk-radius-match",
              std::fabs(radius - radius_theory) <= 0.02 * radius_theory,
              "radius=" + format_double(radius));
  assert_that(res, "flat-interior", consistency <= 1e-8,
              "defect=" + format_double(consistency));
  return res;
}

ExperimentResult run_flocking(const ConfigFile& cfg, const RunContext& ctx,
                              std::uint64_t) {
  ExperimentResult res;
  nlohmann::ordered_json& section = res.resolved["flocking"];
  Reader r(cfg, schema_for("flocking"), section);

  FlockingProblem p;
  const std::string pot = r.str("potential");
  if (pot != "quadratic")
    throw ConfigError("unsupported potential '" + pot + "'", 0, 0);
  const double coeff = r.dbl("coefficient");
  p.rho_max = r.dbl("rho_max");
  p.mass = r.dbl("mass");
  p.lambda = r.dbl("lambda");
  const std::string wkind = r.str("w");
  if (wkind != "gaussian")
    throw ConfigError("unsupported kernel '" + wkind + "'", 0, 0);
  const double amp = r.dbl("w_amplitude");
  const double width = r.dbl("w_width");
  if (width <= 0.0) throw ConfigError("w_width must be positive", 0, 0);
  p.w = [amp, width](Vec2 d) {
    return amp * std::exp(-0.5 * norm2(d) / (width * width));
  };
  p.w_positive_type = amp > 0.0;
  const double half = r.dbl("grid_half");
  const long cells = r.lng("grid_cells");
  p.v = quadratic_potential(half, cells, coeff);

  FlockingOptions opts;
  opts.max_iterations = static_cast<int>(r.lng("max_iterations"));
  opts.tolerance = r.dbl("tolerance");

  const FlockingResult f = flocking_solve(p, opts);
  emit(res, ctx, "density.csv", field_to_csv(f.density));

  double bathtub_l1 = 0.0;
  if (p.lambda == 0.0) {
    const ScalarField bt = bathtub_solve(p.v, p.rho_max, p.mass);
    const double cell = p.v.grid.h * p.v.grid.h;
    for (std::size_t i = 0; i < bt.values.size(); ++i)
      bathtub_l1 += std::fabs(bt.values[i] - f.density.values[i]) * cell;
  }

  CsvTable s = kv_table();
  kv(s, "energy", f.energy);
  kv(s, "kkt_residual", f.kkt_residual);
  kv(s, "iterations", static_cast<long>(f.iterations));
  kv(s, "converged", f.converged);
  kv(s, "support_area", f.support_area);
  kv(s, "saturated_fraction", f.saturated_fraction);
  if (p.lambda == 0.0) kv(s, "bathtub_l1", bathtub_l1);
  emit(res, ctx, "summary.csv", s.to_string());

  section["assertion_constants"] = nlohmann::ordered_json{
      {"bathtub_l1_tol", "1e-8"},
      {"saturation_min", "0.95"},
      {"saturation_level", "0.99"},
      {"interface_band_cells", opts.interface_band_cells}};
  assert_that(res, "descent-converged", f.converged,
              "kkt=" + format_double(f.kkt_residual));
  if (p.lambda == 0.0)
    assert_that(res, "matches-direct-fill", bathtub_l1 <= 1e-8,
                "l1=" + format_double(bathtub_l1));
  else
    assert_that(res, "ceiling-saturation", f.saturated_fraction >= 0.95,
                "fraction=" + format_double(f.saturated_fraction));
  return res;
}

ExperimentResult run_thermo(const ConfigFile& cfg, const RunContext& ctx,
                            std::uint64_t seed) {
  ExperimentResult res;
  nlohmann::ordered_json& section = res.resolved["thermo-scan"];
  Reader r(cfg, schema_for("thermo-scan"), section);

  const std::vector<double> lengths = r.list("lengths");
  const double rho = r.dbl("rho");
  const std::string shapes = r.str("shapes");
  if (shapes != "square" && shapes != "both")
    throw ConfigError("shapes must be 'square' or 'both'", 0, 0);
  if (lengths.empty()) throw ConfigError("lengths must be nonempty", 0, 0);

  ThermoOptions topts;
  topts.multistart_runs = static_cast<int>(r.lng("multistarts"));
  topts.inner.gradient_tolerance = r.dbl("tolerance");
  topts.inner.max_iterations = static_cast<int>(r.lng("max_iterations"));
  topts.inner.seed = seed;
  topts.inner.threads = ctx.serial ? 1 : ctx.threads;

  const std::vector<ThermoPoint> sq = energy_per_volume_scan(lengths, rho, topts);

  CsvTable t;
  t.header = {"shape", "size", "n", "min_energy", "e_per_area", "converged"};
  bool all_converged = true;
  for (const ThermoPoint& pt : sq) {
    all_converged = all_converged && pt.converged;
    t.rows.push_back({"square", format_double(pt.size), std::to_string(pt.n_points),
                      format_double(pt.min_energy), format_double(pt.energy_per_area),
                      pt.converged ? "true" : "false"});
  }

  double disk_gap = 0.0;
  if (shapes == "both") {
    ContainerSpec disk{ContainerSpec::Kind::Disk,
                       lengths.back() / std::sqrt(M_PI)};
    const ThermoPoint dp = energy_per_volume(disk, rho, topts);
    all_converged = all_converged && dp.converged;
    disk_gap = std::fabs(dp.energy_per_area - sq.back().energy_per_area);
    t.rows.push_back({"disk", format_double(dp.size), std::to_string(dp.n_points),
                      format_double(dp.min_energy), format_double(dp.energy_per_area),
                      dp.converged ? "true" : "false"});
  }
  emit(res, ctx, "scan.csv", t.to_string());

  std::vector<double> increments;
  for (std::size_t i = 0; i + 1 < sq.size(); ++i)
    increments.push_back(
        std::fabs(sq[i + 1].energy_per_area - sq[i].energy_per_area));
  bool decreasing = true;
  for (std::size_t i = 0; i + 1 < increments.size(); ++i)
    decreasing = decreasing && increments[i + 1] < increments[i];

  CsvTable s = kv_table();
  kv(s, "increments", join_doubles(increments));
  kv(s, "increments_decreasing", decreasing);
  if (shapes == "both") kv(s, "disk_square_gap", disk_gap);
  kv(s, "all_converged", all_converged);
  emit(res, ctx, "summary.csv", s.to_string());

  assert_that(res, "descents-converged", all_converged, "");
  if (increments.size() >= 2)
    assert_that(res, "energy-density-cauchy", decreasing,
                "increments=" + join_doubles(increments));
  if (shapes == "both" && !increments.empty())
    assert_that(res, "shape-independence", disk_gap < increments.back(),
                "gap=" + format_double(disk_gap) +
                    " last_increment=" + format_double(increments.back()));
  return res;
}

ExperimentResult run_renorm(const ConfigFile& cfg, const RunContext& ctx,
                            std::uint64_t) {
  ExperimentResult res;
  nlohmann::ordered_json& section = res.resolved["renorm-energy"];
  Reader r(cfg, schema_for("renorm-energy"), section);

  const long lattice = r.lng("lattice");
  double box = r.dbl("box");
  const std::vector<double> etas = r.list("etas");
  RenormOptions opts;
  opts.cells_per_eta = static_cast<double>(r.lng("cells_per_eta"));
  const std::string profile = r.str("profile");
  if (profile != "tent")
    throw ConfigError("unsupported profile '" + profile + "'", 0, 0);
  if (lattice < 1 || etas.empty())
    throw ConfigError("lattice and etas must be nonempty/positive", 0, 0);
  if (box <= 0.0) box = static_cast<double>(lattice);
  section["box"] = format_double(box);

  const double a = box / static_cast<double>(lattice);
  std::vector<Vec2> pts;
  std::vector<int> mults;
  for (long iy = 0; iy < lattice; ++iy)
    for (long ix = 0; ix < lattice; ++ix) {
      pts.push_back({-0.5 * box + (ix + 0.5) * a, -0.5 * box + (iy + 0.5) * a});
      mults.push_back(1);
    }
  const double rho =
      static_cast<double>(lattice) * lattice / (box * box);

  CsvTable t;
  t.header = {"eta",          "estimate",  "field_mean_square", "counterterm",
              "grid_cells",   "min_pair",  "overlap_warning"};
  std::vector<double> values;
  for (double eta : etas) {
    const RenormEstimate e =
        renormalized_energy_estimate(pts, mults, rho, eta, box, opts);
    values.push_back(e.value);
    t.rows.push_back({format_double(eta), format_double(e.value),
                      format_double(e.field_mean_square),
                      format_double(e.counterterm), std::to_string(e.grid_cells),
                      format_double(e.min_pair_distance),
                      e.eta_overlap_warning ? "true" : "false"});
  }
  emit(res, ctx, "estimates.csv", t.to_string());

  const RenormEstimate empty =
      renormalized_energy_estimate({}, {}, 0.0, etas.front(), box, opts);

  std::vector<double> diffs;
  for (std::size_t i = 0; i + 1 < values.size(); ++i)
    diffs.push_back(std::fabs(values[i + 1] - values[i]));
  bool decreasing = true;
  for (std::size_t i = 0; i + 1 < diffs.size(); ++i)
    decreasing = decreasing && diffs[i + 1] < diffs[i];

  CsvTable s = kv_table();
  kv(s, "empty_estimate", empty.value);
  kv(s, "diffs", join_doubles(diffs));
  kv(s, "diffs_decreasing", decreasing);
  emit(res, ctx, "summary.csv", s.to_string());

  assert_that(res, "empty-configuration-zero", empty.value == 0.0,
              "value=" + format_double(empty.value));
  if (diffs.size() >= 2)
    assert_that(res, "smearing-refinement-cauchy", decreasing,
                "diffs=" + join_doubles(diffs));
  return res;
}

ExperimentResult run_verify(const ConfigFile& cfg, const RunContext& ctx,
                            std::uint64_t seed) {
  ExperimentResult res;
  res.resolved["verify-all"] = nlohmann::ordered_json::object();
  Reader r(cfg, schema_for("verify-all"), res.resolved["verify-all"]);

  const int threads = ctx.serial ? 1 : ctx.threads;
  const std::vector<CheckResult> checks =
      run_all_checks(seed, threads, ctx.verbose, ctx.out_dir);

  CsvTable t;
  t.header = {"index", "name", "passed", "measured", "threshold"};
  for (const CheckResult& c : checks) {
    t.rows.push_back({std::to_string(c.index), c.name,
                      c.passed ? "true" : "false", c.measured, c.threshold});
    assert_that(res, c.name, c.passed, c.measured);
  }
  emit(res, ctx, "verify_report.csv", t.to_string());
  return res;
}

}  // namespace

bool ExperimentResult::all_passed() const {
  return std::all_of(assertions.begin(), assertions.end(),
                     [](const Assertion& a) { return a.passed; });
}

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds = [] {
    std::vector<std::string> k;
    for (const Schema& s : schemas()) k.push_back(s.kind);
    return k;
  }();
  return kinds;
}

bool is_experiment_kind(const std::string& kind) {
  const auto& k = experiment_kinds();
  return std::find(k.begin(), k.end(), kind) != k.end();
}

std::string describe_experiment(const std::string& kind) {
  const Schema& s = schema_for(kind);
  std::string out = "[" + std::string(s.kind) + "]\n";
  if (s.keys.empty()) out += "  (no keys)\n";
  for (const KeyDesc& k : s.keys) {
    std::string line = "  " + std::string(k.key);
    line.append(line.size() < 18 ? 18 - line.size() : 1, ' ');
    line += std::string(k.type);
    line.append(line.size() < 26 ? 26 - line.size() : 1, ' ');
    std::string unit = k.unit && k.unit[0] ? k.unit : "-";
    line += unit;
    line.append(line.size() < 38 ? 38 - line.size() : 1, ' ');
    line += "default=";
    line += (k.def == nullptr ? "(required)" : (k.def[0] ? k.def : "(empty)"));
    line.append(line.size() < 62 ? 62 - line.size() : 1, ' ');
    line += k.what;
    out += line + "\n";
  }
  return out;
}

ExperimentResult run_experiment(const std::string& kind, const ConfigFile& cfg,
                                const RunContext& ctx) {
  const Schema& schema = schema_for(kind);  // validates the kind

  // [experiment] carries only the dispatch keys.
  for (const auto& [key, entry] : cfg.section_entries("experiment"))
    if (key != "kind" && key != "seed")
      throw ConfigError("unknown key '" + key + "' in [experiment]", entry.line,
                        entry.column);
  for (const std::string& name : cfg.section_names())
    if (name != "experiment" && name != schema.kind)
      throw ConfigError("section [" + name + "] does not belong to experiment '" +
                            kind + "'",
                        0, 0);

  std::filesystem::create_directories(ctx.out_dir);
  const std::uint64_t seed =
      ctx.seed_override ? *ctx.seed_override : cfg.get_u64("experiment", "seed", 1);

  ExperimentResult res;
  if (kind == "ground-state")
    res = run_ground_state(cfg, ctx, seed);
  else if (kind == "sample")
    res = run_sample(cfg, ctx, seed);
  else if (kind == "balayage")
    res = run_balayage(cfg, ctx, seed);
  else if (kind == "exclusion")
    res = run_exclusion(cfg, ctx, seed);
  else if (kind == "meanfield")
    res = run_meanfield(cfg, ctx, seed);
  else if (kind == "flocking")
    res = run_flocking(cfg, ctx, seed);
  else if (kind == "thermo-scan")
    res = run_thermo(cfg, ctx, seed);
  else if (kind == "renorm-energy")
    res = run_renorm(cfg, ctx, seed);
  else if (kind == "verify-all")
    res = run_verify(cfg, ctx, seed);
  else
    throw ConfigError("unknown experiment kind '" + kind + "'", 0, 0);

  res.kind = kind;
  res.seed = seed;
  nlohmann::ordered_json exp;
  exp["kind"] = kind;
  exp["seed"] = seed;
  res.resolved["experiment"] = exp;
  return res;
}

}  // namespace jellium
