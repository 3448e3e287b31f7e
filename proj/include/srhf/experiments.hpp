// experiments.hpp - sweep harness: thermodynamic-limit runs over the box
// side, screening-mass sweeps at fixed box, and disorder statistics.

#pragma once

#include "srhf/disorder.hpp"
#include "srhf/scf.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace srhf {

struct SweepPlan {
  DisorderParams disorder;
  int grid_pts = 32;                // N per unit cell
  std::vector<int> boxes;           // L values
  std::vector<double> masses;       // m values (0 allowed only with neutral_count)
  std::vector<std::uint64_t> seeds;
  FillMode fill = FillMode::fermi(0.0);
  bool neutral_count = false;       // canonical mode with count = realized nuclear charge
  bool uniform_background = false;  // replace mu by its constant mean (free-gas reference)
  SCFOptions scf;
  int workers = 1;

  void validate() const;
};

struct ExperimentRecord {
  std::uint64_t seed = 0;
  int box = 0;
  double mass = 0.0;
  std::string mode;
  EnergyBreakdown energy;
  bool converged = false;
  int iterations = 0;
  double self_consistency = 0.0;
  double wall_ms = 0.0;
};

// One run of the plan at (box, mass, seed); the full SCF state is returned
// so callers can feed it to the inequality checks.
std::pair<ExperimentRecord, SCFResult> run_single(const SweepPlan& plan, int box, double mass,
                                                  std::uint64_t seed);

// Runs the full (box x mass x seed) grid; records are stored in lexicographic
// order regardless of the worker count, so aggregation is deterministic.
std::vector<ExperimentRecord> run_sweep(const SweepPlan& plan);

struct BoxStats {
  int box = 0;
  int count = 0;
  double mean = 0.0;
  double stddev = 0.0;    // sample standard deviation over seeds
  double stderr_mean = 0.0;
  bool all_converged = true;
};

// Per-box statistics of the grand-canonical value per unit volume. A box
// with any non-converged member is marked and its moments are not computed.
std::vector<BoxStats> aggregate_by_box(const std::vector<ExperimentRecord>& records);

struct TrendReport {
  bool valid = false;              // every contributing run converged
  double stddev_first = 0.0;       // scatter at the smallest box
  double stddev_last = 0.0;        // scatter at the largest box
  bool fluctuation_decreasing = false;
  double mean_drift = 0.0;         // |mean(L_max) - mean(L_max/2)|
  double band = 0.0;               // configured band, or 2*(stderr+stderr) when <= 0
  bool drift_within_band = false;
};

// Monotone-fluctuation report over the box sweep: compares the scatter at the
// largest and smallest boxes and the drift of the mean over the last doubling
// against `band` (pass band <= 0 to use twice the summed standard errors).
TrendReport box_trend_report(const std::vector<BoxStats>& stats, double band);

struct MassStats {
  double mass = 0.0;
  int count = 0;
  double mean = 0.0;
  double stddev = 0.0;
  bool all_converged = true;
};

// Per-mass statistics of the canonical energy per unit volume.
std::vector<MassStats> aggregate_by_mass(const std::vector<ExperimentRecord>& records);

struct MonotonicityReport {
  int comparisons = 0;
  int violations = 0;     // energy increases with m beyond the slack
  double worst_excess = 0.0;
};

// Checks per seed that the canonical energy is non-increasing in m within
// slack (violations beyond it are counted).
MonotonicityReport check_mass_monotonicity(const std::vector<ExperimentRecord>& records, double slack);

// g~(x) = L^{-d} sum_k g(tau_{-k} omega, x + k): fields[j] must hold the
// field of the realization shifted by -k_j, in site storage order.
GridFieldD tilde_transform(const std::vector<GridFieldD>& fields, int box);

// Lattice vector of site storage index j, matching tilde_transform's order.
std::array<int, 3> lattice_vector_of(int dim, int box, Eigen::Index site);

}  // namespace srhf
