// scf.hpp - self-consistent solution of the supercell mean-field problem.
//
// Damped fixed-point iteration on the density:
//   rho_{n+1} = rho_n + alpha * (rho(fill(H[V(rho_n - mu)])) - rho_n)
// declared converged when the per-volume L2 step ||rho_{n+1} - rho_n|| / L^{d/2}
// falls below tol. Optional Anderson acceleration sits behind a flag.

#pragma once

#include "srhf/grid.hpp"
#include "srhf/kernels.hpp"
#include "srhf/states.hpp"

#include <string>
#include <vector>

namespace srhf {

struct SCFOptions {
  double mixing = 0.3;          // damping alpha of the linear fixed-point map
  double tol = 1e-8;            // per-volume L2 tolerance on the density step
  int max_iter = 500;
  double deg_tol_scale = 1e-9;  // degeneracy grouping, relative to max(1, |e_F|)
  int anderson_depth = 0;       // 0 = plain damped mixing
  Index dense_max = 6000;       // dense eigensolver size limit
  enum class Init { kNuclear, kUniform } init = Init::kNuclear;
};

// All entries are per unit volume (divided by L^d). kinetic_per_vol carries
// the full trace Tr(-Delta gamma); the energy functional's kinetic term is
// half of it, so energy = kinetic/2 + interaction and grand = energy - eF*N.
struct EnergyBreakdown {
  double kinetic_per_vol = 0.0;
  double interaction_per_vol = 0.0;  // (1/2) D_m(rho - mu, rho - mu) / L^d
  double particles_per_vol = 0.0;
  double energy_per_vol = 0.0;
  double grand_per_vol = 0.0;
  double fermi_level = 0.0;
  double fermi_lower = 0.0;
  double fermi_upper = 0.0;
  int degenerate_at_fermi = 0;
};

struct SCFResult {
  // Converged iterate with a certified fixed-point residual (<= 5 tol); the
  // density of dm, one map application later, agrees with it to that residual.
  GridFieldD density;
  DensityMatrix dm;                    // occupied orbitals only
  EnergyBreakdown energy;
  Eigen::VectorXd eigenvalues;         // full spectrum of the final Hamiltonian
  std::vector<double> residual_history;
  bool converged = false;
  int iterations = 0;
  FillMode mode;
};

EnergyBreakdown total_energy(const DensityMatrix& dm, const GridFieldD& mu, const KernelSpec& kernel,
                             double fermi_level);

SCFResult scf_solve(const GridFieldD& mu, const KernelSpec& kernel, FillMode mode, const SCFOptions& opts);

// Rebuilds the Hamiltonian from res.density, refills (at the recorded Fermi
// level for the grand-canonical mode, at the recorded electron count for the
// canonical one) and returns the per-volume L2 distance between the refilled
// density and res.density. Contract for converged runs: <= 10 * tol.
double verify_self_consistency(const SCFResult& res, const GridFieldD& mu, const KernelSpec& kernel);

// Tr(-Delta gamma) / L^d evaluated mode-wise: sum_i n_i sum_K |K|^2 |c_K(psi_i)|^2.
double kinetic_energy_per_volume(const DensityMatrix& dm);

const char* to_string(FillMode::Kind kind);

}  // namespace srhf
