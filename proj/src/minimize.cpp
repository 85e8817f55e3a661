#include "jellium/minimize.hpp"

#include <cmath>
#include <future>
#include <stdexcept>

#include "jellium/rng.hpp"

namespace jellium {

Objective make_objective(const PlasmaHamiltonian& h) {
  Objective o;
  o.energy = [h](const std::vector<Vec2>& p) { return plasma_energy(h, p); };
  o.gradient = [h](const std::vector<Vec2>& p) { return plasma_gradient(h, p); };
  return o;
}

static double grad_norm2(const std::vector<Vec2>& g) {
  double s = 0.0;
  for (const Vec2& v : g) s += norm2(v);
  return s;
}

static bool all_feasible(const Objective& obj, const std::vector<Vec2>& pts) {
  if (!obj.feasible) return true;
  for (const Vec2& p : pts)
    if (!obj.feasible(p)) return false;
  return true;
}

MinimizeResult gradient_descent(const Objective& obj, std::vector<Vec2> init,
                                const MinimizeOptions& opts) {
  MinimizeResult res;
  std::vector<Vec2> x = std::move(init);
  double e = obj.energy(x);
  if (!std::isfinite(e))
    throw std::domain_error("gradient_descent: infinite energy at start");
  double step = opts.initial_step;

  std::vector<Vec2> trial(x.size());
  std::vector<Vec2> g = obj.gradient(x);
  std::vector<Vec2> prev_x, prev_g;
  int it = 0;
  for (; it < opts.max_iterations; ++it) {
    const double gn2 = grad_norm2(g);
    const double gn = std::sqrt(gn2);
    if (gn <= opts.gradient_tolerance * std::max(1.0, std::fabs(e))) {
      res.converged = true;
      break;
    }
    // Trial step: spectral (alternating Barzilai-Borwein) when the last pair
    // of iterates gives a positive curvature estimate, else the doubled last
    // accepted step. The log-gas Hessian is badly conditioned (soft shell
    // rotations against stiff near-contact pairs), and a fixed-scale step
    // crawls along the soft modes; the spectral trial matches the valley
    // scale while the Armijo halving below keeps the energy monotone.
    double t = step;
    if (!prev_x.empty()) {
      double sy = 0.0, yy = 0.0, ss = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const Vec2 s = x[i] - prev_x[i];
        const Vec2 y = g[i] - prev_g[i];
        sy += dot(s, y);
        yy += dot(y, y);
        ss += dot(s, s);
      }
      if (sy > 0.0 && yy > 0.0) {
        const double bb = (it & 1) ? ss / sy : sy / yy;
        if (std::isfinite(bb) && bb > 0.0) t = std::min(bb, 1e6);
      }
    }
    // Backtracking: accept f(x - t g) <= f(x) - c t |g|^2; reject infeasible
    // or non-finite trials the same way.
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      for (std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] - t * g[i];
      if (all_feasible(obj, trial)) {
        const double et = obj.energy(trial);
        if (std::isfinite(et) && et <= e - opts.armijo_c * t * gn2) {
          prev_x = x;
          prev_g = g;
          x.swap(trial);
          e = et;
          g = obj.gradient(x);
          step = 2.0 * t;  // fallback seed for the next search
          accepted = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!accepted) break;  // line-search failure: keep best iterate
  }
  res.points = std::move(x);
  res.energy = e;
  res.gradient_norm = std::sqrt(grad_norm2(obj.gradient(res.points)));
  res.iterations = it;
  if (res.gradient_norm <=
      opts.gradient_tolerance * std::max(1.0, std::fabs(res.energy)))
    res.converged = true;
  return res;
}

MinimizeResult multistart_minimize_inits(const Objective& obj,
                                         const std::vector<std::vector<Vec2>>& inits,
                                         const MinimizeOptions& opts) {
  if (inits.empty()) throw std::invalid_argument("multistart: no starts");
  std::vector<MinimizeResult> results(inits.size());
  const int threads = std::max(1, opts.threads);
  if (threads == 1 || inits.size() == 1) {
    for (std::size_t r = 0; r < inits.size(); ++r)
      results[r] = gradient_descent(obj, inits[r], opts);
  } else {
    std::vector<std::future<MinimizeResult>> futs;
    futs.reserve(inits.size());
    for (std::size_t r = 0; r < inits.size(); ++r)
      futs.push_back(std::async(std::launch::async, [&, r] {
        return gradient_descent(obj, inits[r], opts);
      }));
    for (std::size_t r = 0; r < inits.size(); ++r) results[r] = futs[r].get();
  }
  std::size_t best = 0;
  for (std::size_t r = 1; r < results.size(); ++r)
    if (results[r].energy < results[best].energy) best = r;
  MinimizeResult out = std::move(results[best]);
  out.best_run = static_cast<int>(best);
  return out;
}

MinimizeResult multistart_minimize(const PlasmaHamiltonian& h, int n_points,
                                   const MinimizeOptions& opts) {
  h.validate();
  if (n_points < 1) throw std::invalid_argument("multistart: need n_points >= 1");
  const double rho_b = h.background_density();
  const double radius = 1.5 * std::sqrt(n_points / (M_PI * rho_b));
  std::vector<std::vector<Vec2>> inits(std::max(1, opts.multistart_runs));
  for (std::size_t r = 0; r < inits.size(); ++r) {
    Rng rng(derive_seed(opts.seed, r));
    std::vector<Vec2>& pts = inits[r];
    pts.reserve(n_points);
    while (static_cast<int>(pts.size()) < n_points) {
      const Vec2 p{rng.uniform(-radius, radius), rng.uniform(-radius, radius)};
      if (norm2(p) > radius * radius) continue;
      bool clash = false;
      for (const Vec2& q : pts)
        if (dist(p, q) < 1e-6) { clash = true; break; }
      if (!clash) pts.push_back(p);
    }
  }
  Objective obj = make_objective(h);
  return multistart_minimize_inits(obj, inits, opts);
}

}  // namespace jellium
