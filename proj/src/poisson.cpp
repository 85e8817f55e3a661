#include "jellium/poisson.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "jellium/kernel.hpp"

namespace jellium {

// FFTW plan creation is not thread-safe.
static std::mutex fftw_mutex;

namespace {

struct FftBuffers {
  int nx = 0, ny = 0;
  std::vector<double> real;
  std::vector<std::complex<double>> spec;
  fftw_plan fwd = nullptr, bwd = nullptr;

  FftBuffers(int nx_, int ny_) : nx(nx_), ny(ny_) {
    real.assign(static_cast<std::size_t>(nx) * ny, 0.0);
    spec.assign(static_cast<std::size_t>(ny) * (nx / 2 + 1), {0.0, 0.0});
    std::lock_guard<std::mutex> lock(fftw_mutex);
    fwd = fftw_plan_dft_r2c_2d(ny, nx, real.data(),
                               reinterpret_cast<fftw_complex*>(spec.data()),
                               FFTW_ESTIMATE);
    bwd = fftw_plan_dft_c2r_2d(ny, nx, reinterpret_cast<fftw_complex*>(spec.data()),
                               real.data(), FFTW_ESTIMATE);
  }
  ~FftBuffers() {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  FftBuffers(const FftBuffers&) = delete;
  FftBuffers& operator=(const FftBuffers&) = delete;
};

}  // namespace

ScalarField solve_periodic_poisson(const ScalarField& rhs) {
  const GridSpec& g = rhs.grid;
  if (g.nx < 2 || g.ny < 2) throw std::invalid_argument("poisson: grid too small");
  FftBuffers fft(g.nx, g.ny);

  double mean = 0.0;
  for (double v : rhs.values) mean += v;
  mean /= rhs.values.size();
  for (std::size_t i = 0; i < rhs.values.size(); ++i)
    fft.real[i] = rhs.values[i] - mean;

  fftw_execute(fft.fwd);

  const double h2 = g.h * g.h;
  const int nxc = g.nx / 2 + 1;
  for (int ky = 0; ky < g.ny; ++ky) {
    for (int kx = 0; kx < nxc; ++kx) {
      const std::size_t idx = static_cast<std::size_t>(ky) * nxc + kx;
      if (kx == 0 && ky == 0) {
        fft.spec[idx] = 0.0;
        continue;
      }
      const double lam = (4.0 - 2.0 * std::cos(2.0 * M_PI * kx / g.nx) -
                          2.0 * std::cos(2.0 * M_PI * ky / g.ny)) /
                         h2;
      fft.spec[idx] /= lam;
    }
  }

  fftw_execute(fft.bwd);

  ScalarField phi(g);
  const double scale = 1.0 / (static_cast<double>(g.nx) * g.ny);
  for (std::size_t i = 0; i < phi.values.size(); ++i)
    phi.values[i] = fft.real[i] * scale;
  return phi;
}

void gradient_periodic(const ScalarField& phi, ScalarField& gx, ScalarField& gy) {
  const GridSpec& g = phi.grid;
  gx = ScalarField(g);
  gy = ScalarField(g);
  const double inv2h = 0.5 / g.h;
  for (int iy = 0; iy < g.ny; ++iy) {
    const int yp = (iy + 1) % g.ny, ym = (iy + g.ny - 1) % g.ny;
    for (int ix = 0; ix < g.nx; ++ix) {
      const int xp = (ix + 1) % g.nx, xm = (ix + g.nx - 1) % g.nx;
      gx.at(ix, iy) = (phi.at(xp, iy) - phi.at(xm, iy)) * inv2h;
      gy.at(ix, iy) = (phi.at(ix, yp) - phi.at(ix, ym)) * inv2h;
    }
  }
}

ScalarField log_potential_of_density(const ScalarField& sigma) {
  const GridSpec& g = sigma.grid;
  const int px = 2 * g.nx, py = 2 * g.ny;
  FftBuffers src(px, py), ker(px, py);

  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix)
      src.real[static_cast<std::size_t>(iy) * px + ix] = sigma.at(ix, iy);

  // Kernel on offsets (dx,dy), dx in [-nx+1, nx-1], wrapped into the padded box.
  const double h = g.h;
  for (int dy = -g.ny + 1; dy <= g.ny - 1; ++dy) {
    for (int dx = -g.nx + 1; dx <= g.nx - 1; ++dx) {
      double w;
      if (std::abs(dx) <= 4 && std::abs(dy) <= 4)
        w = cell_pair_kernel({dx * h, dy * h}, h);
      else
        w = -std::log(h * std::hypot(static_cast<double>(dx), static_cast<double>(dy)));
      const int ix = (dx + px) % px, iy = (dy + py) % py;
      ker.real[static_cast<std::size_t>(iy) * px + ix] = w;
    }
  }

  fftw_execute(src.fwd);
  fftw_execute(ker.fwd);
  const double scale = g.h * g.h / (static_cast<double>(px) * py);
  for (std::size_t i = 0; i < src.spec.size(); ++i) src.spec[i] *= ker.spec[i] * scale;
  fftw_execute(src.bwd);

  ScalarField out(g);
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix)
      out.at(ix, iy) = src.real[static_cast<std::size_t>(iy) * px + ix];
  return out;
}

ScalarField convolve_kernel(const ScalarField& rho,
                            const std::function<double(Vec2)>& kernel) {
  const GridSpec& g = rho.grid;
  const int px = 2 * g.nx, py = 2 * g.ny;
  FftBuffers src(px, py), ker(px, py);

  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix)
      src.real[static_cast<std::size_t>(iy) * px + ix] = rho.at(ix, iy);

  for (int dy = -g.ny + 1; dy <= g.ny - 1; ++dy) {
    for (int dx = -g.nx + 1; dx <= g.nx - 1; ++dx) {
      const double w = kernel({dx * g.h, dy * g.h});
      if (!std::isfinite(w))
        throw std::invalid_argument("convolve_kernel: kernel not finite on grid");
      const int ix = (dx + px) % px, iy = (dy + py) % py;
      ker.real[static_cast<std::size_t>(iy) * px + ix] = w;
    }
  }

  fftw_execute(src.fwd);
  fftw_execute(ker.fwd);
  const double scale = g.h * g.h / (static_cast<double>(px) * py);
  for (std::size_t i = 0; i < src.spec.size(); ++i) src.spec[i] *= ker.spec[i] * scale;
  fftw_execute(src.bwd);

  ScalarField out(g);
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix)
      out.at(ix, iy) = src.real[static_cast<std::size_t>(iy) * px + ix];
  return out;
}

}  // namespace jellium
