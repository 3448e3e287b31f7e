#include "srhf/states.hpp"

#include <cmath>

namespace srhf {

GridFieldD density_of(const DensityMatrix& dm) {
  GridFieldD rho(dm.grid);
  if (dm.count() == 0) return rho;
  if (dm.orbitals.rows() != dm.grid.total() || dm.orbitals.cols() != dm.occupations.size())
    throw std::invalid_argument("density: orbital array does not match the grid or occupations");
  rho.values = dm.orbitals.cwiseAbs2() * dm.occupations;
  return rho;
}

double gram_defect(const DensityMatrix& dm) {
  if (dm.count() == 0) return 0.0;
  Eigen::MatrixXcd gram = dm.grid.cell_volume() * (dm.orbitals.adjoint() * dm.orbitals);
  gram.diagonal().array() -= 1.0;
  return gram.cwiseAbs().maxCoeff();
}

void validate_state(const DensityMatrix& dm, double gram_tol) {
  for (Index i = 0; i < dm.count(); ++i) {
    const double n = dm.occupations[i];
    if (n < -1e-12 || n > 1.0 + 1e-12)
      throw std::invalid_argument("density matrix: occupation outside [0, 1]");
  }
  if (gram_tol >= 0.0 && gram_defect(dm) > gram_tol)
    throw std::invalid_argument("density matrix: orbitals not orthonormal within tolerance");
}

FillResult fill_states(const Eigen::VectorXd& eigenvalues, FillMode mode, double deg_tol_scale) {
  const Index n = eigenvalues.size();
  for (Index i = 0; i + 1 < n; ++i)
    if (eigenvalues[i] > eigenvalues[i + 1])
      throw std::invalid_argument("fill: eigenvalues must be ascending");

  FillResult res;
  res.occupations = Eigen::VectorXd::Zero(n);

  const auto group_tol = [&](double ref) { return deg_tol_scale * std::max(1.0, std::abs(ref)); };

  if (mode.kind == FillMode::Kind::kFixedFermi) {
    const double ef = mode.value;
    const double tol = group_tol(ef);
    int degenerate = 0;
    for (Index i = 0; i < n; ++i) {
      if (eigenvalues[i] < ef - tol)
        res.occupations[i] = 1.0;
      else if (eigenvalues[i] <= ef + tol)
        ++degenerate;  // delta = 0: the level at the Fermi energy stays empty
    }
    res.fermi_level = ef;
    res.fermi_lower = ef;
    res.fermi_upper = ef;
    res.degenerate_at_fermi = degenerate;
    return res;
  }

  // FixedCount: Aufbau filling with an equal split on the last level.
  const double target = mode.value;
  if (target > static_cast<double>(n) + 1e-12)
    throw std::invalid_argument("fill: electron count exceeds the number of basis states");
  if (target <= 0.0) {
    if (n > 0) res.fermi_upper = eigenvalues[0];
    return res;
  }

  double remaining = target;
  Index i = 0;
  Index last_group_begin = 0, last_group_end = 0;
  while (i < n && remaining > 1e-15) {
    Index j = i;
    const double tol = group_tol(eigenvalues[i]);
    while (j < n && eigenvalues[j] - eigenvalues[i] <= tol) ++j;
    const double size = static_cast<double>(j - i);
    last_group_begin = i;
    last_group_end = j;
    if (remaining >= size) {
      res.occupations.segment(i, j - i).setOnes();
      remaining -= size;
    } else {
      res.occupations.segment(i, j - i).setConstant(remaining / size);
      res.degenerate_at_fermi = static_cast<int>(j - i);
      remaining = 0.0;
    }
    i = j;
  }
  if (last_group_end == 0) {
    if (n > 0) res.fermi_upper = eigenvalues[0];
    return res;
  }
  res.fermi_level = eigenvalues[last_group_end - 1];
  res.fermi_lower = eigenvalues[last_group_end - 1];
  res.fermi_upper = (last_group_end < n) ? eigenvalues[last_group_end]
                                         : std::numeric_limits<double>::infinity();
  // Exact count: compensate accumulated rounding in one final adjustment.
  const double realized = res.occupations.sum();
  if (realized != target && last_group_end > last_group_begin) {
    const double correction = (target - realized) / static_cast<double>(last_group_end - last_group_begin);
    for (Index k = last_group_begin; k < last_group_end; ++k) res.occupations[k] += correction;
  }
  return res;
}

}  // namespace srhf
