#include "srhf/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace srhf {

Eigen::VectorXd yukawa_multiplier(const KernelSpec& kernel, const GridSpec& grid) {
  kernel.validate();
  if (kernel.dim != grid.dim) throw std::invalid_argument("kernel: dimension mismatch");
  const Fourier& F = fourier_for(grid);
  const double s = surface_measure(grid.dim);
  const double m2 = kernel.mass * kernel.mass;
  Eigen::VectorXd mult(grid.total());
  for (Index i = 0; i < mult.size(); ++i) {
    const double k2 = F.k_squared()[i];
    if (k2 == 0.0 && kernel.mass == 0.0)
      mult[i] = 0.0;  // jellium background cancels the zero mode
    else
      mult[i] = s / (k2 + m2);
  }
  return mult;
}

double yukawa_energy(const GridFieldD& f, const GridFieldD& g, const KernelSpec& kernel) {
  if (!(f.grid == g.grid)) throw std::invalid_argument("yukawa energy: grid mismatch");
  const Eigen::VectorXd mult = yukawa_multiplier(kernel, f.grid);
  const Eigen::VectorXcd cf = to_fourier(f);
  const Eigen::VectorXcd cg = to_fourier(g);
  double acc = 0.0;
  for (Index i = 0; i < mult.size(); ++i) acc += mult[i] * (std::conj(cf[i]) * cg[i]).real();
  return acc;
}

GridFieldD yukawa_potential(const GridFieldD& f, const KernelSpec& kernel) {
  const Eigen::VectorXd mult = yukawa_multiplier(kernel, f.grid);
  Eigen::VectorXcd modes = to_fourier(f);
  for (Index i = 0; i < modes.size(); ++i) modes[i] *= mult[i];
  return from_fourier(f.grid, modes);
}

GridFieldD periodic_convolution(const Eigen::VectorXcd& w_modes, const GridFieldD& f) {
  if (w_modes.size() != f.grid.total()) throw std::invalid_argument("convolution: mode count mismatch");
  Eigen::VectorXcd modes = to_fourier(f);
  for (Index i = 0; i < modes.size(); ++i) modes[i] *= w_modes[i];
  // The multiplier convention keeps c_K(W*f) = W(K) c_K(f); the inverse is
  // taken without assuming real output only when W breaks Hermitian symmetry.
  return from_fourier(f.grid, modes);
}

namespace {

double yukawa_kernel_value(int dim, double mass, double r) {
  switch (dim) {
    case 1: return std::exp(-mass * r) / mass;
    case 2: return std::cyl_bessel_k(0.0, mass * r);
    case 3: return std::exp(-mass * r) / r;
  }
  throw std::invalid_argument("yukawa kernel: dim must be 1, 2 or 3");
}

}  // namespace

GridFieldD real_space_kernel(const KernelSpec& kernel, const GridSpec& grid) {
  kernel.validate();
  if (kernel.mass <= 0.0)
    throw std::invalid_argument("real-space kernel: no absolutely convergent lattice sum at mass 0");
  if (kernel.dim != grid.dim) throw std::invalid_argument("real-space kernel: dimension mismatch");

  const int d = grid.dim;
  const double L = grid.box;
  // e^{-40} ~ 4e-18 relative: beyond any image at distance 40/m the tail is
  // negligible next to the nearest-image term.
  const int images = static_cast<int>(std::ceil(40.0 / (kernel.mass * L))) + 1;

  GridFieldD table(grid);
  for (Index i = 0; i < grid.total(); ++i) {
    const auto idx = unflatten(grid, i);
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int a = 0; a < d; ++a) x[a] = grid.coord(idx[a]);
    double acc = 0.0;
    std::array<int, 3> j{0, 0, 0};
    const int span = 2 * images + 1;
    Index copies = 1;
    for (int a = 0; a < d; ++a) copies *= span;
    for (Index c = 0; c < copies; ++c) {
      Index rest = c;
      double r2 = 0.0;
      for (int a = d - 1; a >= 0; --a) {
        j[a] = static_cast<int>(rest % span) - images;
        rest /= span;
        const double t = x[a] - j[a] * L;
        r2 += t * t;
      }
      const double r = std::sqrt(r2);
      if (d >= 2 && r == 0.0) continue;  // singular central image at the origin node
      acc += yukawa_kernel_value(d, kernel.mass, r);
    }
    table.values[i] = acc;
  }
  return table;
}

GridFieldD convolve_direct(const GridFieldD& kernel_table, const GridFieldD& f) {
  if (!(kernel_table.grid == f.grid)) throw std::invalid_argument("convolve: grid mismatch");
  const GridSpec& g = f.grid;
  const int n = g.axis_points();
  GridFieldD out(g);
  // The table is stored on box coordinates: position (i-j)*h lives at node
  // index (i-j) + n/2 modulo n.
  for (Index i = 0; i < g.total(); ++i) {
    const auto xi = unflatten(g, i);
    double acc = 0.0;
    for (Index jj = 0; jj < g.total(); ++jj) {
      auto d_idx = unflatten(g, jj);
      for (int a = 0; a < g.dim; ++a) d_idx[a] = wrap_index(xi[a] - d_idx[a] + n / 2, n);
      acc += kernel_table.values[flatten(g, d_idx)] * f.values[jj];
    }
    out.values[i] = g.cell_volume() * acc;
  }
  return out;
}

}  // namespace srhf
