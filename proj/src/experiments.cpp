#include "srhf/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace srhf {

void SweepPlan::validate() const {
  disorder.validate();
  if (boxes.empty()) throw std::invalid_argument("sweep: need at least one box side");
  for (int b : boxes)
    if (b < 1) throw std::invalid_argument("sweep: box sides must be >= 1");
  if (masses.empty()) throw std::invalid_argument("sweep: need at least one mass");
  for (double m : masses) {
    if (m < 0.0) throw std::invalid_argument("sweep: masses must be >= 0");
    if (m == 0.0 && !neutral_count)
      throw std::invalid_argument("sweep: mass 0 requires the neutral canonical mode");
  }
  if (seeds.empty()) throw std::invalid_argument("sweep: need at least one seed");
  if (workers < 1) throw std::invalid_argument("sweep: workers must be >= 1");
}

std::pair<ExperimentRecord, SCFResult> run_single(const SweepPlan& plan, int box, double mass,
                                                  std::uint64_t seed) {
  const auto t0 = std::chrono::steady_clock::now();
  GridSpec grid{plan.disorder.dim, box, plan.grid_pts};
  const Realization real = sample_realization(plan.disorder, box, seed);
  GridFieldD mu = nuclear_density(real, grid);
  if (plan.uniform_background) mu.values.setConstant(quadrature(mu) / grid.volume());

  KernelSpec kernel{mass, plan.disorder.dim, mass == 0.0};
  FillMode mode = plan.neutral_count ? FillMode::count(quadrature(mu)) : plan.fill;

  SCFResult res = scf_solve(mu, kernel, mode, plan.scf);

  ExperimentRecord rec;
  rec.seed = seed;
  rec.box = box;
  rec.mass = mass;
  rec.mode = to_string(mode.kind);
  rec.energy = res.energy;
  rec.converged = res.converged;
  rec.iterations = res.iterations;
  rec.self_consistency = res.converged ? verify_self_consistency(res, mu, kernel) : -1.0;
  rec.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return {std::move(rec), std::move(res)};
}

std::vector<ExperimentRecord> run_sweep(const SweepPlan& plan) {
  plan.validate();
  struct Task {
    int box;
    double mass;
    std::uint64_t seed;
  };
  // (seed, L, m) lexicographic order fixes the fold and the table row order.
  std::vector<Task> tasks;
  for (std::uint64_t seed : plan.seeds)
    for (int box : plan.boxes)
      for (double mass : plan.masses) tasks.push_back({box, mass, seed});

  std::vector<ExperimentRecord> records(tasks.size());
  std::atomic<std::size_t> cursor{0};
  const int workers = std::min<int>(plan.workers, static_cast<int>(tasks.size()));
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = cursor.fetch_add(1);
      if (i >= tasks.size()) break;
      records[i] = run_single(plan, tasks[i].box, tasks[i].mass, tasks[i].seed).first;
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return records;
}

namespace {

// Two-pass moments in record order.
std::pair<double, double> mean_and_stddev(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

}  // namespace

std::vector<BoxStats> aggregate_by_box(const std::vector<ExperimentRecord>& records) {
  std::vector<BoxStats> out;
  std::vector<int> boxes;
  for (const auto& r : records)
    if (std::find(boxes.begin(), boxes.end(), r.box) == boxes.end()) boxes.push_back(r.box);
  for (int box : boxes) {
    BoxStats s;
    s.box = box;
    std::vector<double> values;
    for (const auto& r : records) {
      if (r.box != box) continue;
      ++s.count;
      if (!r.converged) s.all_converged = false;
      values.push_back(r.energy.grand_per_vol);
    }
    if (s.all_converged && !values.empty()) {
      auto [mean, sd] = mean_and_stddev(values);
      s.mean = mean;
      s.stddev = sd;
      s.stderr_mean = sd / std::sqrt(static_cast<double>(values.size()));
    }
    out.push_back(s);
  }
  return out;
}

TrendReport box_trend_report(const std::vector<BoxStats>& stats, double band) {
  TrendReport rep;
  if (stats.size() < 2) return rep;
  std::vector<BoxStats> sorted = stats;
  std::sort(sorted.begin(), sorted.end(),
            [](const BoxStats& a, const BoxStats& b) { return a.box < b.box; });
  rep.valid = true;
  for (const auto& s : sorted) rep.valid = rep.valid && s.all_converged;
  if (!rep.valid) return rep;
  const BoxStats& first = sorted.front();
  const BoxStats& last = sorted.back();
  rep.stddev_first = first.stddev;
  rep.stddev_last = last.stddev;
  rep.fluctuation_decreasing = last.stddev < first.stddev;
  // reference point: the box closest to half of the largest
  const BoxStats* half = &first;
  for (const auto& s : sorted)
    if (std::abs(s.box - last.box / 2) < std::abs(half->box - last.box / 2)) half = &s;
  rep.mean_drift = std::abs(last.mean - half->mean);
  rep.band = band > 0.0 ? band : 2.0 * (last.stderr_mean + half->stderr_mean);
  rep.drift_within_band = rep.mean_drift < rep.band;
  return rep;
}

std::vector<MassStats> aggregate_by_mass(const std::vector<ExperimentRecord>& records) {
  std::vector<MassStats> out;
  std::vector<double> masses;
  for (const auto& r : records)
    if (std::find(masses.begin(), masses.end(), r.mass) == masses.end()) masses.push_back(r.mass);
  for (double mass : masses) {
    MassStats s;
    s.mass = mass;
    std::vector<double> values;
    for (const auto& r : records) {
      if (r.mass != mass) continue;
      ++s.count;
      if (!r.converged) s.all_converged = false;
      values.push_back(r.energy.energy_per_vol);
    }
    if (s.all_converged && !values.empty()) {
      auto [mean, sd] = mean_and_stddev(values);
      s.mean = mean;
      s.stddev = sd;
    }
    out.push_back(s);
  }
  return out;
}

MonotonicityReport check_mass_monotonicity(const std::vector<ExperimentRecord>& records, double slack) {
  MonotonicityReport rep;
  for (const auto& a : records) {
    for (const auto& b : records) {
      if (a.seed != b.seed || a.box != b.box || !(a.mass > b.mass)) continue;
      ++rep.comparisons;
      const double excess = a.energy.energy_per_vol - b.energy.energy_per_vol;
      if (excess > slack) {
        ++rep.violations;
        rep.worst_excess = std::max(rep.worst_excess, excess);
      }
    }
  }
  return rep;
}

std::array<int, 3> lattice_vector_of(int dim, int box, Eigen::Index site) {
  std::array<int, 3> k{0, 0, 0};
  for (int a = dim - 1; a >= 0; --a) {
    k[a] = static_cast<int>(site % box) - box / 2;
    site /= box;
  }
  return k;
}

GridFieldD tilde_transform(const std::vector<GridFieldD>& fields, int box) {
  if (fields.empty()) throw std::invalid_argument("tilde: need at least one field");
  const GridSpec grid = fields.front().grid;
  Eigen::Index expected = 1;
  for (int a = 0; a < grid.dim; ++a) expected *= box;
  if (static_cast<Eigen::Index>(fields.size()) != expected)
    throw std::invalid_argument("tilde: need one field per lattice site");
  GridFieldD acc(grid);
  for (Eigen::Index j = 0; j < expected; ++j) {
    if (!(fields[j].grid == grid)) throw std::invalid_argument("tilde: grid mismatch");
    const auto k = lattice_vector_of(grid.dim, box, j);
    acc.values += translate(fields[j], k).values;
  }
  acc.values /= static_cast<double>(expected);
  return acc;
}

}  // namespace srhf
