// states.hpp - one-particle density matrices on the grid and level filling.

#pragma once

#include "srhf/grid.hpp"

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>

namespace srhf {

// gamma = sum_i n_i |psi_i><psi_i| with orbitals orthonormal under grid
// quadrature and occupations in [0, 1].
struct DensityMatrix {
  GridSpec grid;
  Eigen::MatrixXcd orbitals;     // one column per orbital
  Eigen::VectorXd occupations;

  Index count() const { return occupations.size(); }
};

// rho(x) = sum_i n_i |psi_i(x)|^2; quadrature integral equals sum_i n_i.
GridFieldD density_of(const DensityMatrix& dm);

// Largest absolute deviation of the quadrature Gram matrix from identity.
double gram_defect(const DensityMatrix& dm);

// Throws when occupations leave [0,1] (beyond slack) or, if gram_tol >= 0,
// when the orbital set is not orthonormal to that tolerance.
void validate_state(const DensityMatrix& dm, double gram_tol = 1e-10);

struct FillMode {
  enum class Kind { kFixedFermi, kFixedCount };
  Kind kind = Kind::kFixedFermi;
  double value = 0.0;  // Fermi level, or electron count (real, >= 0)

  static FillMode fermi(double level) { return {Kind::kFixedFermi, level}; }
  static FillMode count(double electrons) {
    if (electrons < 0.0) throw std::invalid_argument("fill: electron count must be >= 0");
    return {Kind::kFixedCount, electrons};
  }
};

struct FillResult {
  Eigen::VectorXd occupations;
  double fermi_level = -std::numeric_limits<double>::infinity();
  // Eigenvalue bracket around the Fermi level for the canonical problem:
  // [top filled eigenvalue, first unfilled eigenvalue].
  double fermi_lower = -std::numeric_limits<double>::infinity();
  double fermi_upper = std::numeric_limits<double>::infinity();
  // Number of states at the Fermi level left unoccupied (grand canonical,
  // where delta = 0 is chosen) or shared fractionally (canonical).
  int degenerate_at_fermi = 0;
};

// Occupations for an ascending eigenvalue list. FixedFermi fills strictly
// below the level and leaves the degenerate level empty (delta = 0, recorded
// in degenerate_at_fermi). FixedCount fills by ascending energy, splitting a
// fractional remainder equally over the last (possibly degenerate) level,
// and returns the realized Fermi level. Levels are grouped within
// deg_tol_scale * max(1, |lambda|).
FillResult fill_states(const Eigen::VectorXd& eigenvalues, FillMode mode, double deg_tol_scale = 1e-9);

}  // namespace srhf
