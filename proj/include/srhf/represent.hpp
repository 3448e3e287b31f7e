// represent.hpp - constructive density-to-state maps.
//
// A nonnegative periodic density rho is realized as the density of an
// admissible state by cutting it with a smooth partition of unity into
// compactly supported pieces (two interleaved families of cell bumps in 1d;
// three periodic patterns of rectangles in 2d), and equipping each piece
// with orbitals sqrt(rho_k/N_k) exp(2 pi i j u(x)), where u is the cumulative
// mass of the piece swept along the element (a serpentine row path in 2d) and
// N_k its total mass. Within an element the orbitals are orthonormal up to
// quadrature error; elements of one family have disjoint supports; the
// assembled state is the average over families, so its density is exactly
// rho and its occupations stay in [0, 1].

#pragma once

#include "srhf/grid.hpp"
#include "srhf/states.hpp"

#include <vector>

namespace srhf {

struct RepresentResult {
  DensityMatrix dm;                   // averaged state, occupations already / families
  std::vector<int> orbital_family;    // family index per orbital
  std::vector<int> orbital_element;   // element id per orbital, unique across families
  Eigen::VectorXd raw_occupations;    // per-orbital occupation before averaging
  int families = 0;
  double reconstruction_error = 0.0;  // per-volume L2 of density_of(dm) - rho
};

RepresentResult represent_density_1d(const GridFieldD& rho);
RepresentResult represent_density_2d(const GridFieldD& rho);

// Largest within-element orthonormality defect max |G_e - I| over elements.
double max_element_gram_defect(const RepresentResult& rep);

// Largest eigenvalue of the assembled state (Gram-weighted occupation
// operator); the Pauli bound requires <= 1 up to quadrature defect.
double pauli_lambda_max(const RepresentResult& rep);

}  // namespace srhf
