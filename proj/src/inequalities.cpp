#include "srhf/inequalities.hpp"

#include "srhf/fft.hpp"
#include "srhf/operators.hpp"
#include "srhf/scf.hpp"

#include <cmath>
#include <random>

namespace srhf {

InequalityReport make_report(std::string name, double lhs, double rhs, std::string instance) {
  InequalityReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.holds = r.margin >= -1e-9 * std::max({std::abs(lhs), std::abs(rhs), 1.0});
  r.instance = std::move(instance);
  return r;
}

InequalityReport hoffmann_ostenhof_check(const DensityMatrix& dm) {
  const GridFieldD rho = density_of(dm);
  const Fourier& F = fourier_for(dm.grid);
  Eigen::VectorXd root(rho.values.size());
  for (Index i = 0; i < root.size(); ++i) root[i] = std::sqrt(std::max(rho.values[i], 1e-300));
  const Eigen::VectorXcd modes = F.forward(root);
  double grad = 0.0;
  for (Index i = 0; i < modes.size(); ++i) grad += F.k_squared()[i] * std::norm(modes[i]);
  const double lhs = grad / dm.grid.volume();
  const double rhs = kinetic_energy_per_volume(dm);
  return make_report("hoffmann-ostenhof", lhs, rhs, "");
}

double semiclassical_kinetic_constant(int dim) {
  const double d = dim;
  const double shell = d * std::pow(2.0 * M_PI, d) / surface_measure(dim);
  return d / (d + 2.0) * std::pow(shell, 2.0 / d);
}

InequalityReport lieb_thirring_check(const DensityMatrix& dm, double constant_factor) {
  for (Index i = 0; i < dm.count(); ++i)
    if (dm.occupations[i] < -1e-12 || dm.occupations[i] > 1.0 + 1e-12)
      throw std::invalid_argument("lieb-thirring: occupations must lie in [0, 1]");
  const int d = dm.grid.dim;
  const double ksc = semiclassical_kinetic_constant(d);
  const double ktest = constant_factor * ksc;
  const GridFieldD rho = density_of(dm);
  const double p = (d + 2.0) / d;
  double integral = 0.0;
  for (Index i = 0; i < rho.values.size(); ++i) integral += std::pow(std::max(rho.values[i], 0.0), p);
  integral *= dm.grid.cell_volume();
  const double lhs = ktest * integral / dm.grid.volume();
  const double rhs = kinetic_energy_per_volume(dm);
  char buf[128];
  std::snprintf(buf, sizeof(buf), "K_test=%.12g K_sc=%.12g", ktest, ksc);
  return make_report("lieb-thirring", lhs, rhs, buf);
}

double projection_objective(const DensityMatrix& dm, const GridFieldD& potential, double lambda) {
  const double vol = dm.grid.volume();
  const double kinetic = kinetic_energy_per_volume(dm) * vol;
  const GridFieldD rho = density_of(dm);
  const double pot = dm.grid.cell_volume() * rho.values.dot(potential.values);
  const double count = dm.occupations.sum();
  return (kinetic + pot - lambda * count) / vol;
}

ProjectionCheck spectral_projection_check(const GridFieldD& potential, double lambda, int trials,
                                          std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("projection check: trials must be >= 1");
  const GridSpec& g = potential.grid;
  Eigen::MatrixXd H = build_hamiltonian(potential, 1.0);
  const Spectrum spec = eigensolve(H, g);

  DensityMatrix projector;
  projector.grid = g;
  Index filled = 0;
  while (filled < spec.eigenvalues.size() && spec.eigenvalues[filled] < lambda) ++filled;
  projector.orbitals = spec.orbitals.leftCols(filled).cast<Complex>();
  projector.occupations = Eigen::VectorXd::Ones(filled);

  ProjectionCheck out;
  out.trials = trials;
  out.projector_value = projection_objective(projector, potential, lambda);
  const double slack = 1e-10 * std::max(1.0, std::abs(out.projector_value));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Index n_orb = std::min<Index>(g.total(), filled + 3);
  double best = std::numeric_limits<double>::infinity();
  double worst_margin = std::numeric_limits<double>::infinity();
  for (int t = 0; t < trials; ++t) {
    Eigen::MatrixXcd raw(g.total(), n_orb);
    for (Index j = 0; j < n_orb; ++j)
      for (Index i = 0; i < g.total(); ++i) raw(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(raw);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(g.total(), n_orb);
    DensityMatrix trial;
    trial.grid = g;
    trial.orbitals = q / std::sqrt(g.cell_volume());
    trial.occupations.resize(n_orb);
    for (Index j = 0; j < n_orb; ++j) trial.occupations[j] = unif(rng);
    const double value = projection_objective(trial, potential, lambda);
    best = std::min(best, value);
    const double margin = value - out.projector_value;
    worst_margin = std::min(worst_margin, margin);
    if (margin < -slack) ++out.violations;
  }
  out.best_trial_value = best;
  out.worst_margin = worst_margin;
  return out;
}

}  // namespace srhf
