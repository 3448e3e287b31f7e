// kernels.hpp - Yukawa/Coulomb interaction on the periodic box.
//
// The bilinear energy is the mode sum
//   D_{m,L}(f,g) = sum_K |S^{d-1}| / (|K|^2 + m^2) * conj(c_K(f)) c_K(g),
// discretization-exact on the resolved modes. The massless case m = 0 is
// admitted only with jellium compensation: the K = 0 term is dropped, which
// is exactly the compensation of the total charge by a uniform background.

#pragma once

#include "srhf/fft.hpp"
#include "srhf/grid.hpp"

namespace srhf {

struct KernelSpec {
  double mass = 1.0;  // screening mass m >= 0
  int dim = 1;
  bool jellium_compensated = false;  // required when mass == 0

  void validate() const {
    if (dim < 1 || dim > 3) throw std::invalid_argument("kernel: dim must be 1, 2 or 3");
    if (mass < 0.0) throw std::invalid_argument("kernel: mass must be >= 0");
    if (mass == 0.0 && !jellium_compensated)
      throw std::invalid_argument("kernel: mass 0 requires jellium compensation");
  }
};

// Lebesgue measure of the unit sphere S^{d-1}: 2, 2*pi, 4*pi.
inline double surface_measure(int dim) {
  switch (dim) {
    case 1: return 2.0;
    case 2: return 2.0 * M_PI;
    case 3: return 4.0 * M_PI;
  }
  throw std::invalid_argument("surface measure: dim must be 1, 2 or 3");
}

// Multiplier |S^{d-1}| / (|K|^2 + m^2) per mode; the K = 0 entry is zero for
// the compensated massless kernel.
Eigen::VectorXd yukawa_multiplier(const KernelSpec& kernel, const GridSpec& grid);

double yukawa_energy(const GridFieldD& f, const GridFieldD& g, const KernelSpec& kernel);

GridFieldD yukawa_potential(const GridFieldD& f, const KernelSpec& kernel);

// Multiplier application in Fourier space for an arbitrary mode array W.
GridFieldD periodic_convolution(const Eigen::VectorXcd& w_modes, const GridFieldD& f);

// Periodized real-space kernel Y_{m,L}(x) = sum_j Y_m(x - jL) tabulated on
// the grid (m > 0 only; the lattice sum is truncated when the exponential
// tail is below 1e-14 relative). For d >= 2 the node at the origin omits the
// singular central image. Used to cross-validate the Fourier multiplier.
GridFieldD real_space_kernel(const KernelSpec& kernel, const GridSpec& grid);

// Direct-summation periodic convolution h^d sum_y k(x - y) f(y); the slow,
// transform-free route used by the kernel cross-validation.
GridFieldD convolve_direct(const GridFieldD& kernel_table, const GridFieldD& f);

}  // namespace srhf
