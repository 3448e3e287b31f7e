#include "srhf/represent.hpp"

#include "srhf/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace srhf {

namespace {

// Smooth step: 0 for t <= 0, 1 for t >= 1, flat at both ends.
double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

// 1d cell bump: 2 on [-1/4, 1/4], support [-1/2, 1/2].
double phi_even(double t) { return 2.0 * smooth_step(2.0 - 4.0 * std::abs(t)); }

// Complement centered at half-integers; support [-1/4, 1/4] around them.
double phi_odd(double t) { return 2.0 - phi_even(t - 0.5) - phi_even(t + 0.5); }

// Unnormalized bump with half-width w.
double eta(double t, double w) {
  const double s = t / w;
  const double r2 = s * s;
  if (r2 >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - r2));
}

double pattern_a(double tx, double ty) { return eta(tx, 5.0 / 12.0) * eta(ty, 5.0 / 12.0); }
double pattern_b(double tx, double ty) {
  return eta(tx - 0.5, 1.0 / 6.0) * eta(ty, 0.25) + eta(tx, 0.25) * eta(ty - 0.5, 1.0 / 6.0);
}
double pattern_c(double tx, double ty) { return eta(tx - 0.5, 1.0 / 3.0) * eta(ty - 0.5, 1.0 / 3.0); }

// Periodization sum_k (h_A + h_B + h_C)(x - k); strictly positive because the
// open pattern kernels cover the torus.
double pattern_total(double x, double y) {
  double acc = 0.0;
  const double fx = std::floor(x), fy = std::floor(y);
  for (int ox = -1; ox <= 1; ++ox)
    for (int oy = -1; oy <= 1; ++oy) {
      const double tx = x - (fx + ox), ty = y - (fy + oy);
      acc += pattern_a(tx, ty) + pattern_b(tx, ty) + pattern_c(tx, ty);
    }
  return acc;
}

struct OrbitalBatch {
  std::vector<Eigen::VectorXcd> orbitals;
  std::vector<double> raw_occ;
  std::vector<int> family;
  std::vector<int> element;
};

// Emit the orbitals of one element given its node list in sweep order:
// node global indices, masked density values g and cumulative positions u.
void emit_element(OrbitalBatch& batch, const GridSpec& grid, const std::vector<Index>& nodes,
                  const std::vector<double>& g, const std::vector<double>& u, double mass,
                  int family, int element) {
  if (mass <= 1e-12) return;
  const double floor_v = std::floor(mass);
  double frac = mass - floor_v;
  int count = static_cast<int>(floor_v);
  if (frac > 1e-12)
    ++count;
  else
    frac = 0.0;
  for (int j = 1; j <= count; ++j) {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(grid.total());
    for (std::size_t p = 0; p < nodes.size(); ++p) {
      if (g[p] <= 0.0) continue;
      const double amp = std::sqrt(g[p] / mass);
      const double phase = 2.0 * M_PI * j * u[p];
      psi[nodes[p]] = Complex(amp * std::cos(phase), amp * std::sin(phase));
    }
    batch.orbitals.push_back(std::move(psi));
    batch.raw_occ.push_back(j <= static_cast<int>(floor_v) ? 1.0 : frac);
    batch.family.push_back(family);
    batch.element.push_back(element);
  }
}

RepresentResult assemble(const GridFieldD& rho, OrbitalBatch&& batch, int families) {
  RepresentResult rep;
  rep.families = families;
  rep.dm.grid = rho.grid;
  const Index norb = static_cast<Index>(batch.orbitals.size());
  rep.dm.orbitals.resize(rho.grid.total(), norb);
  rep.dm.occupations.resize(norb);
  rep.raw_occupations.resize(norb);
  for (Index j = 0; j < norb; ++j) {
    rep.dm.orbitals.col(j) = batch.orbitals[static_cast<std::size_t>(j)];
    rep.raw_occupations[j] = batch.raw_occ[static_cast<std::size_t>(j)];
    rep.dm.occupations[j] = batch.raw_occ[static_cast<std::size_t>(j)] / families;
  }
  rep.orbital_family = std::move(batch.family);
  rep.orbital_element = std::move(batch.element);
  GridFieldD diff = density_of(rep.dm);
  diff.values -= rho.values;
  rep.reconstruction_error = per_volume_l2(diff);
  return rep;
}

void check_density_input(const GridFieldD& rho, int expected_dim) {
  rho.grid.validate();
  if (rho.grid.dim != expected_dim) throw std::invalid_argument("represent: wrong dimension");
  const double scale = std::max(1.0, rho.values.cwiseAbs().maxCoeff());
  // Tolerate solver-tolerance dust below zero; genuinely negative input errors.
  if (rho.values.minCoeff() < -1e-9 * scale)
    throw std::invalid_argument("represent: density must be >= 0");
}

}  // namespace

RepresentResult represent_density_1d(const GridFieldD& rho_in) {
  check_density_input(rho_in, 1);
  const GridSpec& grid = rho_in.grid;
  const int n = grid.axis_points();
  const int N = grid.pts;
  const int L = grid.box;
  const double h = grid.spacing();
  Eigen::VectorXd rho = rho_in.values.cwiseMax(0.0);

  OrbitalBatch batch;
  int element_id = 0;
  const int odd_center_shift = (L % 2 != 0) ? N / 2 : 0;
  for (int family = 0; family < 2; ++family) {
    for (int j = 0; j < L; ++j, ++element_id) {
      // Center node of the element; family 1 sits half a cell to the right.
      const int ic = j * N + odd_center_shift + (family == 1 ? N / 2 : 0);
      const int start = ic - N / 2;

      std::vector<Index> nodes(N);
      std::vector<double> g(N);
      Eigen::VectorXd masked = Eigen::VectorXd::Zero(n);
      for (int p = 0; p < N; ++p) {
        const int gi = wrap_index(start + p, n);
        const double t = p * h - 0.5;
        const double mask = (family == 0) ? phi_even(t) : phi_odd(t);
        nodes[p] = gi;
        g[p] = rho[gi] * mask;
        masked[gi] = g[p];
      }
      const double mass = h * masked.sum();
      if (mass <= 1e-12) continue;

      // Exact cumulative of the trigonometric interpolant, measured from the
      // element's left edge along the circle.
      const Eigen::VectorXd F = periodic_cumulative(masked, static_cast<double>(L));
      const int start_w = wrap_index(start, n);
      std::vector<double> u(N);
      for (int p = 0; p < N; ++p) {
        double c = F[nodes[p]] - F[start_w];
        if (nodes[p] < static_cast<Index>(start_w)) c += mass;
        u[p] = c / mass;
      }
      emit_element(batch, grid, nodes, g, u, mass, family, element_id);
    }
  }
  return assemble(rho_in, std::move(batch), 2);
}

RepresentResult represent_density_2d(const GridFieldD& rho_in) {
  check_density_input(rho_in, 2);
  const GridSpec& grid = rho_in.grid;
  const int n = grid.axis_points();
  const int N = grid.pts;
  const int L = grid.box;
  const double h = grid.spacing();
  Eigen::VectorXd rho = rho_in.values.cwiseMax(0.0);

  struct Rect {
    double cx, cy, wx, wy;
  };
  const std::vector<std::vector<Rect>> family_rects = {
      {{0.0, 0.0, 5.0 / 12.0, 5.0 / 12.0}},
      {{0.5, 0.0, 1.0 / 6.0, 0.25}, {0.0, 0.5, 0.25, 1.0 / 6.0}},
      {{0.5, 0.5, 1.0 / 3.0, 1.0 / 3.0}}};

  // Mask of family I anchored at lattice cell (kx, ky): 3 h_I(x-k) / H(x).
  const auto mask_value = [&](int family, double tx, double ty, double x, double y) {
    double hval = 0.0;
    switch (family) {
      case 0: hval = pattern_a(tx, ty); break;
      case 1: hval = pattern_b(tx, ty); break;
      case 2: hval = pattern_c(tx, ty); break;
    }
    if (hval == 0.0) return 0.0;
    return 3.0 * hval / pattern_total(x, y);
  };

  OrbitalBatch batch;
  int element_id = 0;
  const int parity_shift = (L % 2 != 0) ? N / 2 : 0;
  for (int family = 0; family < 3; ++family) {
    for (int jx = 0; jx < L; ++jx) {
      for (int jy = 0; jy < L; ++jy, ++element_id) {
        std::vector<Index> nodes;
        std::vector<double> g, u;
        double mass_acc = 0.0;
        int row_counter = 0;

        // u accumulates absolute mass positions and is scaled by 1/N_k once
        // the element mass is known.
        for (const Rect& rect : family_rects[family]) {
          const int icx = jx * N + static_cast<int>(rect.cx * N) + parity_shift;
          const int icy = jy * N + static_cast<int>(rect.cy * N) + parity_shift;
          const int Rx = static_cast<int>(std::ceil(rect.wx * N));
          const int Ry = static_cast<int>(std::ceil(rect.wy * N));

          for (int ry = -Ry; ry <= Ry; ++ry, ++row_counter) {
            const int giy = wrap_index(icy + ry, n);
            // Masked full row along x.
            Eigen::VectorXd row = Eigen::VectorXd::Zero(n);
            std::vector<Index> row_nodes;
            std::vector<double> row_g;
            row_nodes.reserve(2 * Rx + 1);
            for (int rx = -Rx; rx <= Rx; ++rx) {
              const int gix = wrap_index(icx + rx, n);
              const double tx = rx * h;
              const double lx = tx + rect.cx;  // offset from the cell anchor
              const double ly = ry * h + rect.cy;
              const double x = grid.coord(gix);
              const double y = grid.coord(giy);
              const double m = mask_value(family, lx, ly, x, y);
              const Index flat = static_cast<Index>(gix) * n + giy;
              const double val = rho[flat] * m;
              row[gix] = val;
              row_nodes.push_back(flat);
              row_g.push_back(val);
            }
            const double row_mass = h * row.sum();
            if (row_mass <= 0.0) continue;
            const Eigen::VectorXd F = periodic_cumulative(row, static_cast<double>(L));
            const int start_w = wrap_index(icx - Rx, n);
            const bool reversed = (row_counter % 2 != 0);
            const std::size_t cnt = row_nodes.size();
            for (std::size_t p = 0; p < cnt; ++p) {
              const std::size_t q = reversed ? cnt - 1 - p : p;
              const int gix = wrap_index(icx - Rx + static_cast<int>(q), n);
              double c = F[gix] - F[start_w];
              if (gix < start_w) c += row_mass;
              if (reversed) c = row_mass - c;
              nodes.push_back(row_nodes[q]);
              g.push_back(row_g[q]);
              u.push_back(mass_acc + h * c);  // scaled by 1/N_k afterwards
            }
            mass_acc += h * row_mass;
          }
        }
        if (mass_acc <= 1e-12) continue;
        for (double& v : u) v /= mass_acc;
        emit_element(batch, grid, nodes, g, u, mass_acc, family, element_id);
      }
    }
  }
  return assemble(rho_in, std::move(batch), 3);
}

double max_element_gram_defect(const RepresentResult& rep) {
  const Index norb = rep.dm.count();
  if (norb == 0) return 0.0;
  double worst = 0.0;
  // Elements are contiguous in the orbital list.
  Index begin = 0;
  while (begin < norb) {
    Index end = begin;
    while (end < norb && rep.orbital_element[end] == rep.orbital_element[begin]) ++end;
    const auto block = rep.dm.orbitals.middleCols(begin, end - begin);
    Eigen::MatrixXcd gram = rep.dm.grid.cell_volume() * (block.adjoint() * block);
    gram.diagonal().array() -= 1.0;
    worst = std::max(worst, gram.cwiseAbs().maxCoeff());
    begin = end;
  }
  return worst;
}

double pauli_lambda_max(const RepresentResult& rep) {
  const Index norb = rep.dm.count();
  if (norb == 0) return 0.0;
  const Eigen::MatrixXcd gram = rep.dm.grid.cell_volume() * (rep.dm.orbitals.adjoint() * rep.dm.orbitals);
  const Eigen::VectorXd root = rep.dm.occupations.cwiseSqrt();
  const Eigen::MatrixXcd weighted = root.asDiagonal() * gram * root.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(weighted, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

}  // namespace srhf
