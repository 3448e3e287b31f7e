// srhf_main.cpp - command line driver: sample, solve, sweep-l, sweep-m,
// verify, represent. Every command is a pure function of its configuration
// and input files; outputs are written with 17-digit decimals so reruns are
// byte-identical (wall-time fields excepted).

#include "CLI11.hpp"
#include "json.hpp"

#include "srhf/disorder.hpp"
#include "srhf/experiments.hpp"
#include "srhf/inequalities.hpp"
#include "srhf/io.hpp"
#include "srhf/represent.hpp"
#include "srhf/scf.hpp"

#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace srhf;

namespace {

// Exit codes: 0 success, 2 validation/config, 3 i/o, 4 non-convergence,
// 5 verification violation.
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;
constexpr int kExitNoConvergence = 4;
constexpr int kExitViolation = 5;

struct Options {
  DisorderParams disorder;
  int pts = 32;
  std::vector<int> boxes{4};
  std::vector<double> masses{1.0};
  std::vector<std::uint64_t> seeds{1};
  std::string fill = "neutral";  // fermi | count | neutral
  double fermi_level = 0.0;
  double electron_count = 0.0;
  SCFOptions scf;
  std::string init = "uniform";
  std::string out = "out";
  int workers = 1;
  bool full_sites = false;
  std::string density_path;
  bool uniform_background = false;
  std::vector<std::string> checks{"ho", "lt", "proj", "represent"};
  int trials = 100;
  double trend_band = 0.0;  // 0: use twice the summed standard errors
};

void add_common_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--dim", o.disorder.dim, "space dimension (1, 2 or 3)");
  cmd->add_option("--charges", o.disorder.charges, "charge values of the finite law")->delimiter(',');
  cmd->add_option("--charge-probs", o.disorder.probabilities, "probabilities of the charge values")
      ->delimiter(',');
  cmd->add_option("--displacement-radius", o.disorder.displacement_radius,
                  "sup-norm radius of the uniform displacement cube");
  cmd->add_option("--bump-width", o.disorder.bump_width, "half-width of the nuclear bump");
  cmd->add_option("--pts", o.pts, "grid points per unit cell per axis (even)");
  cmd->add_option("--boxes", o.boxes, "box sides L")->delimiter(',');
  cmd->add_option("--masses", o.masses, "screening masses m")->delimiter(',');
  cmd->add_option("--seeds", o.seeds, "realization seeds")->delimiter(',');
  cmd->add_flag("--uniform-background", o.uniform_background,
                "replace the sampled charge field by its constant mean");
  cmd->add_option("--fill", o.fill, "filling mode: fermi, count or neutral");
  cmd->add_option("--fermi-level", o.fermi_level, "Fermi level for --fill fermi");
  cmd->add_option("--electron-count", o.electron_count, "electron count for --fill count");
  cmd->add_option("--mixing", o.scf.mixing, "density mixing parameter");
  cmd->add_option("--tol", o.scf.tol, "per-volume L2 convergence tolerance");
  cmd->add_option("--max-iter", o.scf.max_iter, "iteration cap");
  cmd->add_option("--anderson", o.scf.anderson_depth, "Anderson history depth (0 = plain mixing)");
  cmd->add_option("--deg-tol-scale", o.scf.deg_tol_scale, "degeneracy grouping scale");
  cmd->add_option("--dense-max", o.scf.dense_max, "dense eigensolver size limit");
  cmd->add_option("--init", o.init, "initial density: nuclear or uniform");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--workers", o.workers, "concurrent runs in sweeps");
}

SweepPlan make_plan(const Options& o) {
  SweepPlan plan;
  plan.disorder = o.disorder;
  plan.grid_pts = o.pts;
  plan.boxes = o.boxes;
  plan.masses = o.masses;
  plan.seeds = o.seeds;
  plan.scf = o.scf;
  if (o.init != "uniform" && o.init != "nuclear")
    throw CLI::ValidationError("--init must be nuclear or uniform");
  plan.scf.init = (o.init == "uniform") ? SCFOptions::Init::kUniform : SCFOptions::Init::kNuclear;
  plan.workers = o.workers;
  plan.uniform_background = o.uniform_background;
  if (o.fill == "fermi") {
    plan.fill = FillMode::fermi(o.fermi_level);
  } else if (o.fill == "count") {
    plan.fill = FillMode::count(o.electron_count);
  } else if (o.fill == "neutral") {
    plan.neutral_count = true;
  } else {
    throw CLI::ValidationError("--fill must be fermi, count or neutral");
  }
  return plan;
}

json energy_json(const EnergyBreakdown& e) {
  return json{{"kinetic_per_vol", e.kinetic_per_vol},
              {"interaction_per_vol", e.interaction_per_vol},
              {"particles_per_vol", e.particles_per_vol},
              {"energy_per_vol", e.energy_per_vol},
              {"grand_per_vol", e.grand_per_vol},
              {"fermi_level", e.fermi_level},
              {"fermi_lower", e.fermi_lower},
              {"fermi_upper", std::isfinite(e.fermi_upper) ? json(e.fermi_upper) : json(nullptr)},
              {"degenerate_at_fermi", e.degenerate_at_fermi}};
}

json disorder_json(const DisorderParams& p) {
  return json{{"dim", p.dim},
              {"charges", p.charges},
              {"probabilities", p.probabilities},
              {"displacement_radius", p.displacement_radius},
              {"bump_width", p.bump_width},
              {"mean_charge", p.mean_charge()}};
}

void dump(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

int cmd_sample(const Options& o) {
  o.disorder.validate();
  fs::create_directories(o.out);
  const int box = o.boxes.front();
  const std::uint64_t seed = o.seeds.front();
  const Realization real = sample_realization(o.disorder, box, seed);
  const GridSpec grid{o.disorder.dim, box, o.pts};
  const GridFieldD mu = nuclear_density(real, grid);

  json j;
  j["params"] = disorder_json(o.disorder);
  j["box"] = box;
  j["seed"] = seed;
  j["pts"] = o.pts;
  j["total_charge"] = nuclear_charge(real);
  j["quadrature_charge"] = quadrature(mu);
  j["quadrature_error"] = quadrature(mu) - nuclear_charge(real);
  if (o.full_sites) {
    j["site_charges"] = std::vector<double>(real.charges.data(), real.charges.data() + real.sites());
    json disp = json::array();
    for (Eigen::Index s = 0; s < real.sites(); ++s) {
      json row = json::array();
      for (int a = 0; a < o.disorder.dim; ++a) row.push_back(real.displacements(s, a));
      disp.push_back(row);
    }
    j["site_displacements"] = disp;
  }
  dump(o.out + "/realization.json", j);
  write_field_binary(o.out + "/mu.bin", mu);
  write_field_csv(o.out + "/mu.csv", mu);
  std::cout << "sample: wrote " << o.out << "/realization.json (charge " << format_g17(nuclear_charge(real))
            << ")\n";
  return 0;
}

json result_json(const SweepPlan& plan, const ExperimentRecord& rec, const SCFResult& res) {
  json j;
  j["disorder"] = disorder_json(plan.disorder);
  j["box"] = rec.box;
  j["pts"] = plan.grid_pts;
  j["mass"] = rec.mass;
  j["seed"] = rec.seed;
  j["mode"] = rec.mode;
  j["converged"] = rec.converged;
  j["iterations"] = rec.iterations;
  j["self_consistency"] = rec.self_consistency;
  j["energy"] = energy_json(rec.energy);
  j["residual_history"] = res.residual_history;
  j["eigenvalues"] =
      std::vector<double>(res.eigenvalues.data(), res.eigenvalues.data() + res.eigenvalues.size());
  j["wall_ms"] = rec.wall_ms;
  return j;
}

int cmd_solve(const Options& o) {
  const SweepPlan plan = make_plan(o);
  plan.validate();
  fs::create_directories(o.out);
  auto [rec, res] = run_single(plan, plan.boxes.front(), plan.masses.front(), plan.seeds.front());
  dump(o.out + "/result.json", result_json(plan, rec, res));
  write_field_binary(o.out + "/density.bin", res.density);
  std::ostringstream hist;
  hist << "iteration,residual\n";
  for (std::size_t i = 0; i < res.residual_history.size(); ++i)
    hist << (i + 1) << "," << format_g17(res.residual_history[i]) << "\n";
  write_text(o.out + "/history.csv", hist.str());
  std::cout << "solve: " << (rec.converged ? "converged" : "NOT converged") << " in " << rec.iterations
            << " iterations, grand value per volume " << format_g17(rec.energy.grand_per_vol) << "\n";
  return rec.converged ? 0 : kExitNoConvergence;
}

int cmd_sweep_l(const Options& o) {
  SweepPlan plan = make_plan(o);
  plan.validate();
  fs::create_directories(o.out);
  const auto records = run_sweep(plan);
  const auto stats = aggregate_by_box(records);
  write_text(o.out + "/runs.csv", records_csv(records));
  write_text(o.out + "/by_box.csv", box_stats_csv(stats));
  const TrendReport trend = box_trend_report(stats, o.trend_band);
  {
    json j;
    j["valid"] = trend.valid;
    j["stddev_first"] = trend.stddev_first;
    j["stddev_last"] = trend.stddev_last;
    j["fluctuation_decreasing"] = trend.fluctuation_decreasing;
    j["mean_drift"] = trend.mean_drift;
    j["band"] = trend.band;
    j["drift_within_band"] = trend.drift_within_band;
    dump(o.out + "/trend.json", j);
  }
  int failures = 0;
  for (const auto& r : records)
    if (!r.converged) ++failures;
  for (const auto& s : stats) {
    std::cout << "L=" << s.box << " count=" << s.count << " mean=" << format_g17(s.mean)
              << " stddev=" << format_g17(s.stddev) << (s.all_converged ? "" : "  [incomplete]") << "\n";
  }
  if (trend.valid)
    std::cout << "trend: fluctuation decreasing=" << trend.fluctuation_decreasing
              << " mean drift=" << format_g17(trend.mean_drift) << " band=" << format_g17(trend.band)
              << "\n";
  if (failures) std::cout << "sweep-l: " << failures << " runs did not converge\n";
  return failures ? kExitNoConvergence : 0;
}

int cmd_sweep_m(const Options& o) {
  Options oo = o;
  oo.fill = "neutral";
  SweepPlan plan = make_plan(oo);
  plan.validate();
  fs::create_directories(o.out);
  const auto records = run_sweep(plan);
  const auto stats = aggregate_by_mass(records);
  write_text(o.out + "/runs.csv", records_csv(records));
  write_text(o.out + "/by_mass.csv", mass_stats_csv(stats));
  const MonotonicityReport rep = check_mass_monotonicity(records, 10.0 * plan.scf.tol);
  json j;
  j["comparisons"] = rep.comparisons;
  j["violations"] = rep.violations;
  j["worst_excess"] = rep.worst_excess;
  dump(o.out + "/monotonicity.json", j);
  int failures = 0;
  for (const auto& r : records)
    if (!r.converged) ++failures;
  for (const auto& s : stats)
    std::cout << "m=" << format_g17(s.mass) << " mean=" << format_g17(s.mean) << "\n";
  std::cout << "monotonicity violations: " << rep.violations << "\n";
  if (failures) return kExitNoConvergence;
  return rep.violations ? kExitViolation : 0;
}

int cmd_verify(const Options& o) {
  const SweepPlan plan = make_plan(o);
  plan.validate();
  fs::create_directories(o.out);
  json reports = json::array();
  std::ostringstream csv;
  csv << "check,instance,lhs,rhs,margin,holds\n";
  int violations = 0;

  const auto note = [&](const InequalityReport& r) {
    reports.push_back(json{{"check", r.name},
                           {"instance", r.instance},
                           {"lhs", r.lhs},
                           {"rhs", r.rhs},
                           {"margin", r.margin},
                           {"holds", r.holds}});
    csv << r.name << "," << r.instance << "," << format_g17(r.lhs) << "," << format_g17(r.rhs) << ","
        << format_g17(r.margin) << "," << (r.holds ? 1 : 0) << "\n";
    if (!r.holds) ++violations;
  };

  const auto has = [&](const char* name) {
    return std::find(o.checks.begin(), o.checks.end(), name) != o.checks.end();
  };

  for (int box : plan.boxes) {
    for (double mass : plan.masses) {
      for (std::uint64_t seed : plan.seeds) {
        auto [rec, res] = run_single(plan, box, mass, seed);
        char tag[96];
        std::snprintf(tag, sizeof(tag), "seed=%llu L=%d m=%g", (unsigned long long)seed, box, mass);
        if (!rec.converged) {
          std::cout << "verify: skipping non-converged run " << tag << "\n";
          ++violations;
          continue;
        }
        if (has("ho")) {
          InequalityReport r = hoffmann_ostenhof_check(res.dm);
          r.instance = tag;
          note(r);
        }
        if (has("lt")) {
          InequalityReport r = lieb_thirring_check(res.dm, 0.5);
          r.instance = std::string(tag) + " " + r.instance;
          note(r);
        }
        if (has("proj")) {
          const GridSpec grid{plan.disorder.dim, box, plan.grid_pts};
          const Realization real = sample_realization(plan.disorder, box, seed);
          const GridFieldD mu = nuclear_density(real, grid);
          GridFieldD f(grid, res.density.values - mu.values);
          const GridFieldD V = yukawa_potential(f, KernelSpec{mass, grid.dim, mass == 0.0});
          const ProjectionCheck c = spectral_projection_check(V, res.energy.fermi_level, o.trials, seed);
          reports.push_back(json{{"check", "spectral-projection"},
                                 {"instance", tag},
                                 {"projector_value", c.projector_value},
                                 {"best_trial_value", c.best_trial_value},
                                 {"worst_margin", c.worst_margin},
                                 {"trials", c.trials},
                                 {"violations", c.violations}});
          csv << "spectral-projection," << tag << "," << format_g17(c.projector_value) << ","
              << format_g17(c.best_trial_value) << "," << format_g17(c.worst_margin) << ","
              << (c.violations == 0 ? 1 : 0) << "\n";
          violations += c.violations;
        }
        if (has("represent") && plan.disorder.dim <= 2) {
          const RepresentResult rep = (plan.disorder.dim == 1) ? represent_density_1d(res.density)
                                                               : represent_density_2d(res.density);
          const bool ok = rep.reconstruction_error < 1e-8 && rep.dm.occupations.minCoeff() >= 0.0 &&
                          rep.dm.occupations.maxCoeff() <= 1.0;
          reports.push_back(json{{"check", "representability"},
                                 {"instance", tag},
                                 {"reconstruction_error", rep.reconstruction_error},
                                 {"orthonormality_defect", max_element_gram_defect(rep)},
                                 {"pauli_lambda_max", pauli_lambda_max(rep)},
                                 {"holds", ok}});
          csv << "representability," << tag << "," << format_g17(rep.reconstruction_error) << ",,,"
              << (ok ? 1 : 0) << "\n";
          if (!ok) ++violations;
        }
      }
    }
  }
  dump(o.out + "/verify_report.json", reports);
  write_text(o.out + "/verify_summary.csv", csv.str());
  std::cout << "verify: " << violations << " violations\n";
  return violations ? kExitViolation : 0;
}

int cmd_represent(const Options& o) {
  fs::create_directories(o.out);
  GridFieldD rho;
  if (!o.density_path.empty()) {
    rho = read_field_binary(o.density_path);
  } else {
    const SweepPlan plan = make_plan(o);
    plan.validate();
    auto [rec, res] = run_single(plan, plan.boxes.front(), plan.masses.front(), plan.seeds.front());
    if (!rec.converged) {
      std::cout << "represent: source solve did not converge\n";
      return kExitNoConvergence;
    }
    rho = res.density;
  }
  if (rho.grid.dim == 3) throw CLI::ValidationError("represent: d=3 construction is not supported");
  const RepresentResult rep = (rho.grid.dim == 1) ? represent_density_1d(rho) : represent_density_2d(rho);
  json j;
  j["dim"] = rho.grid.dim;
  j["box"] = rho.grid.box;
  j["pts"] = rho.grid.pts;
  j["families"] = rep.families;
  j["orbitals"] = rep.dm.count();
  j["reconstruction_error"] = rep.reconstruction_error;
  j["orthonormality_defect"] = max_element_gram_defect(rep);
  j["pauli_lambda_max"] = pauli_lambda_max(rep);
  j["occupations"] =
      std::vector<double>(rep.dm.occupations.data(), rep.dm.occupations.data() + rep.dm.count());
  dump(o.out + "/represent.json", j);
  std::cout << "represent: " << rep.dm.count() << " orbitals, reconstruction error "
            << format_g17(rep.reconstruction_error) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"supercell reduced Hartree-Fock simulator for disordered crystals"};
  app.require_subcommand(1);
  app.set_config("--config", "", "configuration file (INI keys per subcommand section)");
  app.allow_config_extras(false);

  Options o;
  o.scf.anderson_depth = 5;

  auto* sample = app.add_subcommand("sample", "sample a realization and write its charge field");
  add_common_options(sample, o);
  sample->add_flag("--full-sites", o.full_sites, "include per-site data in realization.json");

  auto* solve = app.add_subcommand("solve", "one self-consistent run");
  add_common_options(solve, o);

  auto* sweep_l = app.add_subcommand("sweep-l", "box-side sweep at fixed Fermi level");
  add_common_options(sweep_l, o);
  sweep_l->add_option("--trend-band", o.trend_band,
                      "absolute band for the mean-drift report (default: stderr based)");

  auto* sweep_m = app.add_subcommand("sweep-m", "screening-mass sweep (neutral canonical)");
  add_common_options(sweep_m, o);

  auto* verify = app.add_subcommand("verify", "inequality and representability checks");
  add_common_options(verify, o);
  verify->add_option("--checks", o.checks, "subset of: ho lt proj represent (empty = no-op)")
      ->delimiter(',');
  verify->add_option("--trials", o.trials, "random trial states per projection check");

  auto* represent = app.add_subcommand("represent", "build a density matrix from a density");
  add_common_options(represent, o);
  represent->add_option("--density", o.density_path, "input density field (binary)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (sample->parsed()) return cmd_sample(o);
    if (solve->parsed()) return cmd_solve(o);
    if (sweep_l->parsed()) return cmd_sweep_l(o);
    if (sweep_m->parsed()) return cmd_sweep_m(o);
    if (verify->parsed()) return cmd_verify(o);
    if (represent->parsed()) return cmd_represent(o);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
