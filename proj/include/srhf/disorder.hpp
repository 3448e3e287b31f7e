// disorder.hpp - stationary random nuclear distributions on the lattice of a
// periodic box, materialized as smooth compactly supported charge bumps.

#pragma once

#include "srhf/grid.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace srhf {

// Finite charge law q_i with probability p_i, plus the geometry of one
// nuclear bump. The constraint displacement_radius + bump_width <= 1/2 keeps
// every bump inside its own unit cell, so periodization never needs to wrap
// an individual bump across the box seam.
struct DisorderParams {
  int dim = 1;
  std::vector<double> charges{1.0};
  std::vector<double> probabilities{1.0};
  double displacement_radius = 0.0;  // sup-norm radius, fraction of the unit cell
  double bump_width = 0.25;          // half-width w of the bump, in (0, 1/2]

  void validate() const;
  double mean_charge() const;
};

// One sampled disorder configuration on the L^d lattice sites of the box.
// Sites are stored row-major over the per-axis index k + L/2 in [0, L).
struct Realization {
  DisorderParams params;
  int box = 1;
  std::uint64_t seed = 0;
  Eigen::VectorXd charges;                   // one per site
  Eigen::Matrix<double, Eigen::Dynamic, 3> displacements;  // |eta|_inf <= r_disp

  Eigen::Index sites() const { return charges.size(); }
};

// Normalized bump value chi_w(x) = c_w * exp(-1 / (1 - |x/w|^2)) for |x| < w.
// The constant c_w makes the integral over R^d equal to 1; it is computed
// once per (dim, w) by refined quadrature and cached.
double bump_function(const std::array<double, 3>& x, int dim, double width);
double bump_normalization(int dim, double width);

Realization sample_realization(const DisorderParams& params, int box, std::uint64_t seed);

// Finite-box analogue of the lattice shift action: per-site data cyclically
// shifted so that nuclear_density(shift_realization(r, k)) equals the cyclic
// grid translate of nuclear_density(r) by k, with identical floating-point
// values.
Realization shift_realization(const Realization& real, const std::array<int, 3>& shift);

// Total nuclear charge sum_k q_k of the realization.
double nuclear_charge(const Realization& real);

// mu(x) = sum_k q_k chi_w(x - k - eta_k) sampled at the grid nodes.
GridFieldD nuclear_density(const Realization& real, const GridSpec& grid);

}  // namespace srhf
