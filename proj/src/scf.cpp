#include "srhf/scf.hpp"

#include "srhf/operators.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <deque>
#include <stdexcept>

namespace srhf {

const char* to_string(FillMode::Kind kind) {
  return kind == FillMode::Kind::kFixedFermi ? "fermi" : "count";
}

double kinetic_energy_per_volume(const DensityMatrix& dm) {
  const Fourier& F = fourier_for(dm.grid);
  double acc = 0.0;
  for (Index j = 0; j < dm.count(); ++j) {
    if (dm.occupations[j] == 0.0) continue;
    const Eigen::VectorXcd modes = F.forward(Eigen::VectorXcd(dm.orbitals.col(j)));
    double t = 0.0;
    for (Index i = 0; i < modes.size(); ++i) t += F.k_squared()[i] * std::norm(modes[i]);
    acc += dm.occupations[j] * t;
  }
  return acc / dm.grid.volume();
}

EnergyBreakdown total_energy(const DensityMatrix& dm, const GridFieldD& mu, const KernelSpec& kernel,
                             double fermi_level) {
  if (!(dm.grid == mu.grid)) throw std::invalid_argument("energy: grid mismatch");
  const double vol = dm.grid.volume();
  EnergyBreakdown e;
  e.kinetic_per_vol = kinetic_energy_per_volume(dm);
  GridFieldD diff = density_of(dm);
  diff.values -= mu.values;
  e.interaction_per_vol = 0.5 * yukawa_energy(diff, diff, kernel) / vol;
  e.particles_per_vol = dm.occupations.sum() / vol;
  e.energy_per_vol = 0.5 * e.kinetic_per_vol + e.interaction_per_vol;
  e.fermi_level = fermi_level;
  e.grand_per_vol = e.energy_per_vol -
                    (e.particles_per_vol != 0.0 ? fermi_level * e.particles_per_vol : 0.0);
  return e;
}

namespace {

struct IterationState {
  Spectrum spectrum;
  FillResult fill;
  Eigen::VectorXd density_out;
};

// One application of the fixed-point map at density rho.
IterationState apply_map(const Eigen::VectorXd& rho, const GridFieldD& mu, const KernelSpec& kernel,
                         FillMode mode, const SCFOptions& opts, const Eigen::MatrixXd& kinetic) {
  const GridSpec& g = mu.grid;
  GridFieldD f(g, rho - mu.values);
  const GridFieldD V = yukawa_potential(f, kernel);
  Eigen::MatrixXd H = kinetic;
  H.diagonal() += V.values;
  IterationState s;
  s.spectrum = eigensolve(H, g, opts.dense_max);
  s.fill = fill_states(s.spectrum.eigenvalues, mode, opts.deg_tol_scale);
  s.density_out = s.spectrum.orbitals.cwiseAbs2() * s.fill.occupations;
  return s;
}

DensityMatrix occupied_state(const GridSpec& g, const IterationState& s) {
  std::vector<Index> keep;
  for (Index i = 0; i < s.fill.occupations.size(); ++i)
    if (s.fill.occupations[i] > 0.0) keep.push_back(i);
  DensityMatrix dm;
  dm.grid = g;
  dm.orbitals.resize(g.total(), static_cast<Index>(keep.size()));
  dm.occupations.resize(static_cast<Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    dm.orbitals.col(static_cast<Index>(j)) = s.spectrum.orbitals.col(keep[j]).cast<Complex>();
    dm.occupations[static_cast<Index>(j)] = s.fill.occupations[keep[j]];
  }
  return dm;
}

}  // namespace

SCFResult scf_solve(const GridFieldD& mu, const KernelSpec& kernel, FillMode mode, const SCFOptions& opts) {
  const GridSpec& g = mu.grid;
  g.validate();
  kernel.validate();
  if (kernel.dim != g.dim) throw std::invalid_argument("scf: kernel dimension mismatch");
  if (mu.values.minCoeff() < 0.0) throw std::invalid_argument("scf: nuclear density must be >= 0");
  const double charge = quadrature(mu);
  if (kernel.mass == 0.0) {
    if (mode.kind != FillMode::Kind::kFixedCount ||
        std::abs(mode.value - charge) > 1e-9 * std::max(1.0, charge))
      throw std::invalid_argument("scf: mass 0 requires the neutral canonical mode (count = total charge)");
  }

  const GridFieldD zero_potential(g);
  const Eigen::MatrixXd kinetic = build_hamiltonian(zero_potential, 0.5);

  Eigen::VectorXd rho;
  if (opts.init == SCFOptions::Init::kNuclear)
    rho = mu.values;
  else
    rho = Eigen::VectorXd::Constant(g.total(), charge / g.volume());

  SCFResult res;
  res.mode = mode;
  const double pervol = std::sqrt(g.cell_volume() / g.volume());

  std::deque<Eigen::VectorXd> hist_rho, hist_residual;
  IterationState state;
  Eigen::VectorXd rho_reported;
  for (int it = 1; it <= opts.max_iter; ++it) {
    state = apply_map(rho, mu, kernel, mode, opts, kinetic);
    const Eigen::VectorXd residual = state.density_out - rho;
    rho_reported = rho;

    Eigen::VectorXd rho_next;
    if (opts.anderson_depth > 0) {
      hist_rho.push_back(rho);
      hist_residual.push_back(residual);
      while (static_cast<int>(hist_rho.size()) > opts.anderson_depth + 1) {
        hist_rho.pop_front();
        hist_residual.pop_front();
      }
      const int m = static_cast<int>(hist_rho.size()) - 1;
      if (m >= 1) {
        // Anderson: minimize |residual + dG theta| over the history window,
        // then mix along the optimized direction.
        Eigen::MatrixXd dG(residual.size(), m), dR(residual.size(), m);
        for (int c = 0; c < m; ++c) {
          dG.col(c) = hist_residual[c] - residual;
          dR.col(c) = hist_rho[c] - rho;
        }
        const Eigen::VectorXd theta = (dG.transpose() * dG)
                                          .ldlt()
                                          .solve(-dG.transpose() * residual);
        const Eigen::VectorXd rho_bar = rho + dR * theta;
        const Eigen::VectorXd res_bar = residual + dG * theta;
        rho_next = rho_bar + opts.mixing * res_bar;
      } else {
        rho_next = rho + opts.mixing * residual;
      }
    } else {
      rho_next = rho + opts.mixing * residual;
    }

    const double step = (rho_next - rho).norm() * pervol;
    res.residual_history.push_back(step);
    rho = rho_next;
    res.iterations = it;
    // The mixed step alone can be small while the map residual is not (the
    // accelerated update may move little along flat directions); the
    // self-consistency contract needs the raw residual small too. The raw
    // map may be locally expansive, so the reported density is the iterate
    // whose residual was certified, not a further map application of it.
    if (step <= opts.tol && residual.norm() * pervol <= 5.0 * opts.tol) {
      res.converged = true;
      break;
    }
  }

  // State at the reported iterate (already computed in the last iteration).
  res.dm = occupied_state(g, state);
  res.density = GridFieldD(g, rho_reported);
  res.eigenvalues = state.spectrum.eigenvalues;
  const double fermi = (mode.kind == FillMode::Kind::kFixedFermi) ? mode.value : state.fill.fermi_level;
  res.energy = total_energy(res.dm, mu, kernel, fermi);
  res.energy.fermi_lower = state.fill.fermi_lower;
  res.energy.fermi_upper = state.fill.fermi_upper;
  res.energy.degenerate_at_fermi = state.fill.degenerate_at_fermi;
  return res;
}

double verify_self_consistency(const SCFResult& res, const GridFieldD& mu, const KernelSpec& kernel) {
  const GridSpec& g = mu.grid;
  GridFieldD f(g, res.density.values - mu.values);
  const GridFieldD V = yukawa_potential(f, kernel);
  Eigen::MatrixXd H = build_hamiltonian(GridFieldD(g), 0.5);
  H.diagonal() += V.values;
  const Spectrum spec = eigensolve(H, g);
  FillMode refill = res.mode;
  if (refill.kind == FillMode::Kind::kFixedFermi) refill.value = res.energy.fermi_level;
  const FillResult fill = fill_states(spec.eigenvalues, refill);
  const Eigen::VectorXd refilled = spec.orbitals.cwiseAbs2() * fill.occupations;
  GridFieldD gap(g, refilled - res.density.values);
  return per_volume_l2(gap);
}

}  // namespace srhf
