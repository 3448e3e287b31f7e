// operators.hpp - one-particle Hamiltonians on the collocation grid.

#pragma once

#include "srhf/grid.hpp"

#include <Eigen/Dense>

namespace srhf {

// Dense matrix of H = kinetic_factor * (-Laplacian) + V in the grid basis:
// the kinetic part is the circulant with symbol kinetic_factor * |K|^2, the
// potential acts pointwise. Real symmetric by construction (the kinetic
// stencil is symmetrized exactly after the inverse transform).
Eigen::MatrixXd build_hamiltonian(const GridFieldD& potential, double kinetic_factor = 0.5);

struct Spectrum {
  Eigen::VectorXd eigenvalues;  // ascending
  Eigen::MatrixXd orbitals;     // columns, orthonormal under grid quadrature
};

// Dense eigendecomposition; grids beyond dense_limit points are refused (the
// limit is configuration, default 6000).
Spectrum eigensolve(const Eigen::MatrixXd& hamiltonian, const GridSpec& grid, Index dense_limit = 6000);

}  // namespace srhf
