// grid.hpp - uniform periodic grids over the box [-L/2, L/2)^d and fields on them.

#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace srhf {

using Index = Eigen::Index;

// Collocation grid for the periodic box of integer side L: N points per unit
// cell per axis, spacing h = 1/N, n = N*L nodes per axis, (N*L)^d in total.
// Node coordinates are x_i = -L/2 + i*h. The discrete Fourier mode set is
// K = (2*pi/L) * m with m in {-n/2, ..., n/2 - 1}; it is symmetric under
// K -> -K except for the single Nyquist row m = -n/2 per axis, whose
// multipliers are evaluated with the Nyquist |K|^2 itself.
struct GridSpec {
  int dim = 1;  // d in {1, 2, 3}
  int box = 1;  // L, integer >= 1
  int pts = 4;  // N, even integer >= 4

  void validate() const {
    if (dim < 1 || dim > 3) throw std::invalid_argument("grid: dim must be 1, 2 or 3");
    if (box < 1) throw std::invalid_argument("grid: box side must be >= 1");
    if (pts < 4 || pts % 2 != 0) throw std::invalid_argument("grid: pts per cell must be even and >= 4");
  }

  int axis_points() const { return box * pts; }
  Index total() const {
    Index t = 1;
    for (int a = 0; a < dim; ++a) t *= axis_points();
    return t;
  }
  double spacing() const { return 1.0 / pts; }
  double cell_volume() const { return std::pow(spacing(), dim); }
  double volume() const { return std::pow(static_cast<double>(box), dim); }
  double coord(int i) const { return -0.5 * box + i * spacing(); }

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.dim == b.dim && a.box == b.box && a.pts == b.pts;
  }
};

// Row-major flattening, axis 0 slowest.
inline Index flatten(const GridSpec& g, const std::array<int, 3>& idx) {
  Index r = 0;
  for (int a = 0; a < g.dim; ++a) r = r * g.axis_points() + idx[a];
  return r;
}

inline std::array<int, 3> unflatten(const GridSpec& g, Index flat) {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = g.dim - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % g.axis_points());
    flat /= g.axis_points();
  }
  return idx;
}

inline int wrap_index(int i, int n) {
  i %= n;
  return i < 0 ? i + n : i;
}

// Real- or complex-valued function sampled on the grid nodes.
template <typename Scalar = double>
struct GridField {
  GridSpec grid;
  Eigen::VectorX<Scalar> values;

  GridField() = default;
  explicit GridField(const GridSpec& g) : grid(g), values(Eigen::VectorX<Scalar>::Zero(g.total())) {}
  GridField(const GridSpec& g, Eigen::VectorX<Scalar> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.total()) throw std::invalid_argument("grid field: value count mismatch");
  }
};

using GridFieldD = GridField<double>;
using GridFieldC = GridField<std::complex<double>>;

// Grid quadrature functional h^d * sum(values).
template <typename Scalar>
Scalar quadrature(const GridField<Scalar>& f) {
  return f.grid.cell_volume() * f.values.sum();
}

template <typename Scalar>
double l2_norm(const GridField<Scalar>& f) {
  return std::sqrt(f.grid.cell_volume() * f.values.squaredNorm());
}

// ||f||_{L^2} / L^{d/2}, the per-volume norm used for SCF convergence.
template <typename Scalar>
double per_volume_l2(const GridField<Scalar>& f) {
  return l2_norm(f) / std::sqrt(f.grid.volume());
}

// Cyclic translate by a lattice vector: out(x) = in(x + k).
template <typename Scalar>
GridField<Scalar> translate(const GridField<Scalar>& f, const std::array<int, 3>& k) {
  const GridSpec& g = f.grid;
  const int n = g.axis_points();
  GridField<Scalar> out(g);
  for (Index j = 0; j < g.total(); ++j) {
    auto idx = unflatten(g, j);
    for (int a = 0; a < g.dim; ++a) idx[a] = wrap_index(idx[a] + k[a] * g.pts, n);
    out.values[j] = f.values[flatten(g, idx)];
  }
  return out;
}

}  // namespace srhf
