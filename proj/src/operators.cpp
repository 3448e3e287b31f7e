#include "srhf/operators.hpp"

#include "srhf/fft.hpp"

#include <stdexcept>

namespace srhf {

Eigen::MatrixXd build_hamiltonian(const GridFieldD& potential, double kinetic_factor) {
  const GridSpec& g = potential.grid;
  const Fourier& F = fourier_for(g);
  const Index total = g.total();
  const int n = g.axis_points();

  // Kinetic stencil s(dx) = (1/n^d) sum_K factor*|K|^2 exp(i K . dx), via a
  // plain index-space inverse DFT (no c_K normalization or center phases).
  Eigen::VectorXcd data(total);
  for (Index i = 0; i < total; ++i) data[i] = kinetic_factor * F.k_squared()[i];
  {
    Eigen::FFT<double> fft;
    std::vector<Complex> line(n), out(n);
    for (int axis = 0; axis < g.dim; ++axis) {
      Index stride = 1;
      for (int a = axis + 1; a < g.dim; ++a) stride *= n;
      const Index lines = total / n;
      for (Index l = 0; l < lines; ++l) {
        const Index block = l / stride;
        const Index offset = l % stride;
        const Index base = block * stride * n + offset;
        for (int i = 0; i < n; ++i) line[i] = data[base + i * stride];
        fft.inv(out, line);
        for (int i = 0; i < n; ++i) data[base + i * stride] = out[i];
      }
    }
  }

  Eigen::VectorXd stencil = data.real();
  // Exact symmetry under index negation so the assembled matrix is exactly
  // symmetric.
  for (Index i = 0; i < total; ++i) {
    auto idx = unflatten(g, i);
    for (int a = 0; a < g.dim; ++a) idx[a] = wrap_index(-idx[a], n);
    const Index j = flatten(g, idx);
    if (j > i) {
      const double v = 0.5 * (stencil[i] + stencil[j]);
      stencil[i] = v;
      stencil[j] = v;
    }
  }

  Eigen::MatrixXd H(total, total);
  for (Index i = 0; i < total; ++i) {
    const auto xi = unflatten(g, i);
    for (Index j = 0; j < total; ++j) {
      auto d_idx = unflatten(g, j);
      for (int a = 0; a < g.dim; ++a) d_idx[a] = wrap_index(xi[a] - d_idx[a], n);
      H(i, j) = stencil[flatten(g, d_idx)];
    }
    H(i, i) += potential.values[i];
  }
  return H;
}

Spectrum eigensolve(const Eigen::MatrixXd& hamiltonian, const GridSpec& grid, Index dense_limit) {
  const Index total = grid.total();
  if (hamiltonian.rows() != total || hamiltonian.cols() != total)
    throw std::invalid_argument("eigensolve: matrix size does not match the grid");
  if (total > dense_limit)
    throw std::runtime_error("eigensolve: grid exceeds the dense solver limit; raise scf.dense_max");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(hamiltonian);
  if (solver.info() != Eigen::Success) throw std::runtime_error("eigensolve: decomposition failed");
  Spectrum s;
  s.eigenvalues = solver.eigenvalues();
  // Euclidean-orthonormal eigenvectors -> quadrature-orthonormal orbitals.
  s.orbitals = solver.eigenvectors() / std::sqrt(grid.cell_volume());
  return s;
}

}  // namespace srhf
