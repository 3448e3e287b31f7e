#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "srhf/disorder.hpp"
#include "srhf/fft.hpp"
#include "srhf/operators.hpp"
#include "srhf/scf.hpp"

#include <cmath>
#include <random>

using namespace srhf;

namespace {

// Independent free-gas oracle: enumerate the plane-wave kinetic levels of the
// box from first principles, Aufbau-fill `electrons` with an equal split on
// the last level, and return Tr(-Delta gamma) per unit volume.
double free_gas_kinetic_per_volume(int box, int pts, double electrons) {
  const int n = box * pts;
  std::vector<double> k2(n);
  for (int i = 0; i < n; ++i) {
    const int m = (i < n / 2) ? i : i - n;
    const double k = 2.0 * M_PI * m / box;
    k2[i] = k * k;
  }
  std::sort(k2.begin(), k2.end());
  double acc = 0.0;
  double remaining = electrons;
  std::size_t i = 0;
  while (i < k2.size() && remaining > 0.0) {
    std::size_t j = i;
    while (j < k2.size() && k2[j] - k2[i] <= 1e-9 * std::max(1.0, k2[i])) ++j;
    const double size = static_cast<double>(j - i);
    const double fill = std::min(remaining, size);
    acc += fill * k2[i];
    remaining -= fill;
    i = j;
  }
  return acc / box;
}

GridFieldD constant_mu(const GridSpec& g, double value) {
  GridFieldD mu(g);
  mu.values.setConstant(value);
  return mu;
}

DisorderParams disordered_params() {
  DisorderParams p;
  p.dim = 1;
  p.charges = {1.0, 2.0};
  p.probabilities = {0.5, 0.5};
  p.displacement_radius = 0.1;
  p.bump_width = 0.2;
  return p;
}

}  // namespace

TEST_CASE("density of simple states") {
  GridSpec g{1, 2, 8};
  SUBCASE("no orbitals -> zero field") {
    DensityMatrix dm;
    dm.grid = g;
    dm.orbitals.resize(g.total(), 0);
    dm.occupations.resize(0);
    CHECK(density_of(dm).values.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("one constant orbital at occupation 1") {
    DensityMatrix dm;
    dm.grid = g;
    dm.orbitals = Eigen::MatrixXcd::Constant(g.total(), 1, 1.0 / std::sqrt(g.volume()));
    dm.occupations = Eigen::VectorXd::Ones(1);
    const GridFieldD rho = density_of(dm);
    CHECK((rho.values.array() - 1.0 / g.volume()).abs().maxCoeff() < 1e-14);
    CHECK(std::abs(quadrature(rho) - 1.0) < 1e-12);
  }
  SUBCASE("random state: integral equals the occupation sum") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss;
    Eigen::MatrixXcd raw(g.total(), 5);
    for (Index j = 0; j < 5; ++j)
      for (Index i = 0; i < g.total(); ++i) raw(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(raw);
    DensityMatrix dm;
    dm.grid = g;
    dm.orbitals =
        (qr.householderQ() * Eigen::MatrixXcd::Identity(g.total(), 5)) / std::sqrt(g.cell_volume());
    dm.occupations.resize(5);
    for (Index j = 0; j < 5; ++j) dm.occupations[j] = 0.2 * static_cast<double>(j + 1) / 5.0;
    validate_state(dm);
    CHECK(std::abs(quadrature(density_of(dm)) - dm.occupations.sum()) < 1e-10);
  }
}

TEST_CASE("fill_states") {
  Eigen::VectorXd eigs(4);
  eigs << 0.0, 1.0, 1.0, 3.0;

  SUBCASE("fermi level below the spectrum empties the state") {
    const FillResult r = fill_states(eigs, FillMode::fermi(-1.0));
    CHECK(r.occupations.cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("count 2 splits the degenerate level") {
    const FillResult r = fill_states(eigs, FillMode::count(2.0));
    CHECK(r.occupations[0] == 1.0);
    CHECK(r.occupations[1] == doctest::Approx(0.5));
    CHECK(r.occupations[2] == doctest::Approx(0.5));
    CHECK(r.occupations[3] == 0.0);
    CHECK(r.fermi_level == 1.0);
    CHECK(r.fermi_upper == 3.0);
    CHECK(r.degenerate_at_fermi == 2);
  }
  SUBCASE("count then fermi reproduces the integer-filled part") {
    const FillResult c = fill_states(eigs, FillMode::count(2.0));
    const FillResult f = fill_states(eigs, FillMode::fermi(c.fermi_level));
    CHECK(f.occupations[0] == 1.0);
    CHECK(f.occupations[1] == 0.0);  // delta = 0 at the Fermi level
    CHECK(f.degenerate_at_fermi == 2);
  }
  SUBCASE("count beyond the basis throws") { CHECK_THROWS(fill_states(eigs, FillMode::count(5.0))); }
  SUBCASE("unsorted input throws") {
    Eigen::VectorXd bad(2);
    bad << 1.0, 0.0;
    CHECK_THROWS(fill_states(bad, FillMode::fermi(0.0)));
  }
}

TEST_CASE("free gas: constant nuclear charge solves in one step") {
  GridSpec g{1, 4, 64};
  const GridFieldD mu = constant_mu(g, 1.0);
  const KernelSpec kernel{1.0, 1, false};
  SCFOptions opts;
  const SCFResult res = scf_solve(mu, kernel, FillMode::count(4.0), opts);

  CHECK(res.converged);
  CHECK(res.energy.interaction_per_vol < 1e-12);
  const double oracle = free_gas_kinetic_per_volume(4, 64, 4.0);
  CHECK(res.energy.kinetic_per_vol == doctest::Approx(oracle).epsilon(1e-10));
  // Exact finite-box closed form: (pi^2/3) (1 + 2/L^2).
  const double closed = M_PI * M_PI / 3.0 * (1.0 + 2.0 / 16.0);
  CHECK(res.energy.kinetic_per_vol == doctest::Approx(closed).epsilon(1e-12));
  CHECK(res.energy.particles_per_vol == doctest::Approx(1.0).epsilon(1e-12));
  // Realized Fermi bracket pins the half-filled shell
  CHECK(res.energy.fermi_level == doctest::Approx(0.5 * M_PI * M_PI).epsilon(1e-10));
  CHECK(res.energy.degenerate_at_fermi == 2);
}

TEST_CASE("empty system: fermi level below the spectrum") {
  GridSpec g{1, 2, 16};
  GridFieldD mu(g);
  const KernelSpec kernel{1.0, 1, false};
  SCFOptions opts;
  const SCFResult res = scf_solve(mu, kernel, FillMode::fermi(-1.0), opts);
  CHECK(res.converged);
  CHECK(res.energy.kinetic_per_vol == 0.0);
  CHECK(res.energy.interaction_per_vol == 0.0);
  CHECK(res.energy.particles_per_vol == 0.0);
  CHECK(res.energy.grand_per_vol == 0.0);
}

TEST_CASE("trial-state bound: gamma = 0 pays the nuclear self-energy") {
  GridSpec g{1, 2, 32};
  const DisorderParams p = disordered_params();
  const GridFieldD mu = nuclear_density(sample_realization(p, 2, 7), g);
  const KernelSpec kernel{1.0, 1, false};
  DensityMatrix empty;
  empty.grid = g;
  empty.orbitals.resize(g.total(), 0);
  empty.occupations.resize(0);
  const EnergyBreakdown e = total_energy(empty, mu, kernel, 1.0);
  const double expect = 0.5 * yukawa_energy(mu, mu, kernel) / g.volume();
  CHECK(e.grand_per_vol == doctest::Approx(expect).epsilon(1e-12));
  CHECK(e.kinetic_per_vol == 0.0);
}

TEST_CASE("scf on a disordered instance") {
  GridSpec g{1, 4, 16};
  const DisorderParams p = disordered_params();
  const GridFieldD mu = nuclear_density(sample_realization(p, 4, 11), g);
  const KernelSpec kernel{1.0, 1, false};
  SCFOptions opts;
  opts.tol = 1e-8;
  opts.max_iter = 2000;
  const FillMode mode = FillMode::count(quadrature(mu));
  const SCFResult res = scf_solve(mu, kernel, mode, opts);
  REQUIRE(res.converged);

  SUBCASE("self-consistency residual within the contract") {
    CHECK(verify_self_consistency(res, mu, kernel) <= 10.0 * opts.tol);
  }

  SUBCASE("detector sanity: perturbed density is flagged") {
    SCFResult bumped = res;
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss;
    GridFieldD noise(g);
    for (Index i = 0; i < g.total(); ++i) noise.values[i] = gauss(rng);
    noise.values *= 1e-3 / per_volume_l2(noise);
    bumped.density.values += noise.values;
    CHECK(verify_self_consistency(bumped, mu, kernel) > 1e-4);
  }

  SUBCASE("uniqueness of the density: independent initializations agree") {
    SCFOptions alt = opts;
    alt.init = SCFOptions::Init::kUniform;
    const SCFResult other = scf_solve(mu, kernel, mode, alt);
    REQUIRE(other.converged);
    GridFieldD gap(g, other.density.values - res.density.values);
    CHECK(per_volume_l2(gap) < 10.0 * opts.tol);
  }

  SUBCASE("energy descent: converged state beats the zero and Aufbau states") {
    DensityMatrix empty;
    empty.grid = g;
    empty.orbitals.resize(g.total(), 0);
    empty.occupations.resize(0);
    const double fermi = res.energy.fermi_level;
    const double zero_value = total_energy(empty, mu, kernel, fermi).grand_per_vol;
    CHECK(res.energy.grand_per_vol <= zero_value + 1e-12);

    // Aufbau state of the first iteration from rho_0 = mu: V vanishes.
    Eigen::MatrixXd H = build_hamiltonian(GridFieldD(g), 0.5);
    const Spectrum s = eigensolve(H, g);
    const FillResult fill = fill_states(s.eigenvalues, mode);
    DensityMatrix first;
    first.grid = g;
    first.orbitals = s.orbitals.cast<Complex>();
    first.occupations = fill.occupations;
    const double aufbau = total_energy(first, mu, kernel, fermi).grand_per_vol;
    CHECK(res.energy.grand_per_vol <= aufbau + 1e-12);
  }

  SUBCASE("occupations respect the Pauli constraint") {
    CHECK(res.dm.occupations.minCoeff() >= 0.0);
    CHECK(res.dm.occupations.maxCoeff() <= 1.0 + 1e-12);
  }

  SUBCASE("anderson acceleration reaches the same density") {
    SCFOptions acc = opts;
    acc.anderson_depth = 5;
    const SCFResult fast = scf_solve(mu, kernel, mode, acc);
    REQUIRE(fast.converged);
    CHECK(fast.iterations <= res.iterations);
    GridFieldD gap(g, fast.density.values - res.density.values);
    CHECK(per_volume_l2(gap) < 10.0 * opts.tol);
  }
}

TEST_CASE("variational optimality of the converged grand-canonical state") {
  GridSpec g{1, 3, 12};
  const DisorderParams p = disordered_params();
  const GridFieldD mu = nuclear_density(sample_realization(p, 3, 2), g);
  const KernelSpec kernel{1.0, 1, false};
  SCFOptions opts;
  opts.tol = 1e-9;
  opts.max_iter = 3000;
  // mid-gap between the free shells at 2.19 and 8.77 for L = 3
  const double fermi = 5.5;
  const SCFResult res = scf_solve(mu, kernel, FillMode::fermi(fermi), opts);
  REQUIRE(res.converged);

  GridFieldD f(g, res.density.values - mu.values);
  const GridFieldD V = yukawa_potential(f, kernel);
  const auto objective = [&](const DensityMatrix& dm) {
    const double kin = 0.5 * kinetic_energy_per_volume(dm) * g.volume();
    const double pot = g.cell_volume() * density_of(dm).values.dot(V.values);
    return (kin + pot - fermi * dm.occupations.sum()) / g.volume();
  };
  const double value = objective(res.dm);

  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Index k = res.dm.count() + 2;
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXcd raw(g.total(), k);
    for (Index j = 0; j < k; ++j)
      for (Index i = 0; i < g.total(); ++i) raw(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(raw);
    DensityMatrix t;
    t.grid = g;
    t.orbitals =
        (qr.householderQ() * Eigen::MatrixXcd::Identity(g.total(), k)) / std::sqrt(g.cell_volume());
    t.occupations.resize(k);
    for (Index j = 0; j < k; ++j) t.occupations[j] = unif(rng);
    CHECK(objective(t) >= value - 1e-10 * std::max(1.0, std::abs(value)));
  }
}

TEST_CASE("mass zero requires the neutral canonical mode") {
  GridSpec g{1, 2, 16};
  const GridFieldD mu = constant_mu(g, 1.0);
  const KernelSpec jellium{0.0, 1, true};
  SCFOptions opts;
  CHECK_THROWS(scf_solve(mu, jellium, FillMode::fermi(1.0), opts));
  CHECK_THROWS(scf_solve(mu, jellium, FillMode::count(1.0), opts));  // not neutral
  const SCFResult res = scf_solve(mu, jellium, FillMode::count(quadrature(mu)), opts);
  CHECK(res.converged);
}

TEST_CASE("negative nuclear density is rejected") {
  GridSpec g{1, 2, 16};
  GridFieldD mu(g);
  mu.values.setConstant(-0.1);
  SCFOptions opts;
  CHECK_THROWS(scf_solve(mu, KernelSpec{1.0, 1, false}, FillMode::count(1.0), opts));
}
