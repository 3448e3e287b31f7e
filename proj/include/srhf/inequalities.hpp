// inequalities.hpp - kinetic-energy inequality checks and the variational
// optimality probe for spectral projections.

#pragma once

#include "srhf/grid.hpp"
#include "srhf/states.hpp"

#include <cstdint>
#include <string>

namespace srhf {

struct InequalityReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  bool holds = false;   // margin >= -1e-9 * max(|lhs|, |rhs|, 1)
  std::string instance;
};

InequalityReport make_report(std::string name, double lhs, double rhs, std::string instance);

// Per-volume |grad sqrt(rho)|^2 (spectral gradient, rho clamped at 1e-300)
// against per-volume Tr(-Delta gamma).
InequalityReport hoffmann_ostenhof_check(const DensityMatrix& dm);

// Semiclassical kinetic constant K_sc(d) = d/(d+2) * (d (2 pi)^d / |S^{d-1}|)^{2/d};
// the uniform free gas attains it in the large-box limit.
double semiclassical_kinetic_constant(int dim);

// K_test * per-volume int rho^{(d+2)/d} against per-volume Tr(-Delta gamma),
// with K_test = constant_factor * K_sc(d). The default factor 1/2 keeps the
// test constant safely below any admissible Lieb-Thirring constant; factor 1
// probes free-gas saturation. Requires occupations in [0, 1].
InequalityReport lieb_thirring_check(const DensityMatrix& dm, double constant_factor = 0.5);

struct ProjectionCheck {
  double projector_value = 0.0;   // objective at gamma = P_lambda, per volume
  double best_trial_value = 0.0;  // smallest objective among the random trials
  double worst_margin = 0.0;      // min over trials of trial - projector
  int violations = 0;             // trials beating the projector beyond slack
  int trials = 0;
};

// Objective Tr(-Delta gamma) + <V, rho_gamma> - lambda Tr(gamma), per volume,
// of the spectral projector P_lambda = 1_{(-inf,lambda)}(-Delta + V) versus
// `trials` random admissible states (random orthonormal orbitals, occupations
// uniform in [0, 1]). Slack: 1e-10 * max(1, |projector value|).
ProjectionCheck spectral_projection_check(const GridFieldD& potential, double lambda, int trials,
                                          std::uint64_t seed);

// Objective above for an arbitrary state (full Laplacian, no 1/2).
double projection_objective(const DensityMatrix& dm, const GridFieldD& potential, double lambda);

}  // namespace srhf
