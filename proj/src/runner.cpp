#include "zeropi/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "zeropi/dispersive.hpp"

namespace zeropi {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.11e", v);
  return buf;
}

namespace {

void atomic_write(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.good()) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

json config_echo(const RunConfig& c) {
  json j;
  j["task"] = task_name(c.task);
  j["EC_GHz"] = c.params.EC;
  j["ECJ_GHz"] = c.params.ECJ;
  j["EJ_GHz"] = c.params.EJ;
  j["EL_GHz"] = c.params.EL;
  j["dC"] = c.params.dC;
  j["dCJ"] = c.params.dCJ;
  j["dEJ"] = c.params.dEJ;
  j["dEL"] = c.params.dEL;
  j["flux_Phi0"] = c.params.flux;
  j["ng_theta"] = c.params.ng_theta;
  j["temperature_K"] = c.params.temperature;
  j["kappa_zeta_per_s"] = c.params.kappa_zeta;
  j["M_Phi0_per_A"] = c.params.fluxline.M;
  j["R_ohm"] = c.params.fluxline.R;
  j["n_theta_max"] = c.basis.n_theta_max;
  j["phi_points"] = c.basis.phi_points;
  j["phi_max"] = c.basis.phi_max;
  j["n_zeta_max"] = c.basis.n_zeta_max;
  j["sweep_parameter"] = sweep_parameter_name(c.sweep_parameter);
  j["sweep_start"] = c.sweep_start;
  j["sweep_stop"] = c.sweep_stop;
  j["sweep_points"] = c.sweep_points;
  j["sweep_3d"] = c.sweep_3d;
  j["levels"] = c.levels;
  j["states_3d"] = c.states_3d;
  j["A_flux_Phi0"] = c.amplitudes.A_flux;
  j["A_charge_e"] = c.amplitudes.A_charge;
  j["A_Ic_rel"] = c.amplitudes.A_Ic;
  j["f_ir_Hz"] = c.cutoffs.omega_ir / constants::two_pi;
  j["f_uv_Hz"] = c.cutoffs.omega_uv / constants::two_pi;
  j["t_meas_s"] = c.cutoffs.t_meas;
  j["include_charge"] = c.include_charge;
  j["zeta_coverage"] = c.zeta_coverage;
  j["eigen_tol"] = c.eigen.tol;
  j["eigen_seed"] = c.eigen.seed;
  j["out_dir"] = c.out_dir;
  j["workers"] = c.workers;
  return j;
}

struct StageClock {
  json& timings;
  std::string stage;
  std::chrono::steady_clock::time_point start;
  StageClock(json& t, std::string s)
      : timings(t), stage(std::move(s)), start(std::chrono::steady_clock::now()) {}
  ~StageClock() {
    const double sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    timings[stage] = sec;
  }
};

int heuristic_states_3d(const RunConfig& cfg, const DerivedEnergies& de) {
  if (cfg.states_3d > 0) return cfg.states_3d;
  int n_kept = 1;
  if (cfg.params.temperature > 0.0) {
    const double x = de.Omega_zeta /
                     (constants::kB_over_h_GHz_per_K * cfg.params.temperature);
    n_kept = static_cast<int>(std::ceil(-std::log1p(-cfg.zeta_coverage) / x)) + 1;
  }
  n_kept = std::min(n_kept, cfg.basis.zeta_dim());
  long k = static_cast<long>(cfg.levels) * n_kept + cfg.levels;
  k = std::min<long>(k, cfg.basis.dim3d() - 2);
  return static_cast<int>(k);
}

struct TaskOutput {
  std::vector<std::pair<std::string, std::string>> files;  // name -> content
  json results;  // task-specific summary placed into the manifest
};

TaskOutput run_spectrum(const RunConfig& cfg, const BasisSpec& basis, json& warnings) {
  TaskOutput out;
  std::ostringstream csv;
  csv << "grid_value,level_index,label_l,label_n,energy_GHz,overlap\n";
  const double grid_value = cfg.params.flux;

  if (basis.n_zeta_max > 0) {
    const DerivedEnergies de = derive_energies(cfg.params);
    const EigenSolution sol2d =
        lowest_eigenpairs(build_h_2d(cfg.params, basis), cfg.levels, cfg.eigen);
    const int k3 = heuristic_states_3d(cfg, de);
    const EigenSolution sol3d =
        lowest_eigenpairs(build_h_3d(cfg.params, basis), k3, cfg.eigen);
    const LabeledSpectrum labels = label_dressed(sol3d, sol2d, basis);
    for (size_t s = 0; s < labels.states.size(); ++s) {
      const StateLabel& st = labels.states[s];
      csv << format_number(grid_value) << ',' << s << ',' << st.l << ',' << st.n
          << ',' << format_number(st.energy) << ',' << format_number(st.overlap)
          << '\n';
      if (st.hybridized)
        warnings.push_back("spectrum: state " + std::to_string(s) +
                           " hybridized (overlap " + format_number(st.overlap) + ")");
    }
    out.results["states"] = labels.states.size();
    out.results["E0_GHz"] = sol3d.eigenvalues(0);
  } else {
    const EigenSolution sol =
        lowest_eigenpairs(build_h_2d(cfg.params, basis), cfg.levels, cfg.eigen);
    for (int l = 0; l < sol.eigenvalues.size(); ++l)
      csv << format_number(grid_value) << ',' << l << ',' << l << ",0,"
          << format_number(sol.eigenvalues(l)) << ',' << format_number(1.0) << '\n';
    out.results["states"] = cfg.levels;
    out.results["E0_GHz"] = sol.eigenvalues(0);
  }
  out.files.emplace_back("spectrum.csv", csv.str());
  return out;
}

TaskOutput run_sweep(const RunConfig& cfg, const BasisSpec& basis, json& warnings) {
  SweepOptions opt;
  opt.three_d = cfg.sweep_3d;
  opt.eigen = cfg.eigen;
  opt.workers = cfg.workers;
  const std::vector<double> grid = cfg.sweep_grid();
  const DispersionCurve curve =
      sweep(cfg.params, basis, cfg.sweep_parameter, grid, cfg.levels, opt);

  std::ostringstream csv;
  csv << "grid_value,level_index,label_l,label_n,energy_GHz,overlap\n";
  int failed = 0;
  for (size_t i = 0; i < grid.size(); ++i) {
    if (curve.point_failed[i]) {
      ++failed;
      warnings.push_back("sweep: solver failed at " +
                         sweep_parameter_name(cfg.sweep_parameter) + " = " +
                         format_number(grid[i]));
      continue;
    }
    if (curve.anticrossing[i])
      warnings.push_back("sweep: weak level-tracking overlap at " +
                         format_number(grid[i]));
    for (int l = 0; l < cfg.levels; ++l)
      csv << format_number(grid[i]) << ',' << l << ",-1,-1,"
          << format_number(curve.energies[i][l]) << ',' << format_number(0.0)
          << '\n';
  }
  TaskOutput out;
  out.files.emplace_back("spectrum.csv", csv.str());
  out.results["points"] = grid.size();
  out.results["failed_points"] = failed;
  return out;
}

TaskOutput run_dispersive(const RunConfig& cfg, const BasisSpec& basis, json& warnings) {
  const DerivedEnergies de = derive_energies(cfg.params);
  const EigenSolution sol2d =
      lowest_eigenpairs(build_h_2d(cfg.params, basis), cfg.levels, cfg.eigen);
  const Eigen::MatrixXcd g = coupling_matrix(sol2d, cfg.params, basis, cfg.levels);
  const DispersiveReport rep =
      stark_lamb(g, sol2d.eigenvalues, de.Omega_zeta, cfg.levels);
  for (const auto& w : rep.warnings) warnings.push_back("dispersive: " + w);

  std::ostringstream csv;
  csv << "level,chi_GHz,Lambda_GHz,chi01_GHz,max_g_over_Delta\n";
  for (int l = 0; l < cfg.levels; ++l)
    csv << l << ',' << format_number(rep.chi(l)) << ','
        << format_number(rep.Lambda(l)) << ',' << format_number(rep.chi01) << ','
        << format_number(rep.max_g_over_Delta) << '\n';

  TaskOutput out;
  out.files.emplace_back("dispersive.csv", csv.str());
  out.results["chi01_GHz"] = rep.chi01;
  out.results["max_g_over_Delta"] = rep.max_g_over_Delta;
  return out;
}

TaskOutput run_coherence(const RunConfig& cfg, const BasisSpec& basis, json& warnings,
                         bool& channel_failure) {
  BudgetOptions opt;
  opt.amplitudes = cfg.amplitudes;
  opt.cutoffs = cfg.cutoffs;
  opt.include_charge = cfg.include_charge;
  opt.levels = cfg.levels;
  opt.states_3d = cfg.states_3d;
  opt.zeta_coverage = cfg.zeta_coverage;
  opt.eigen = cfg.eigen;
  const RateBreakdown budget = coherence_budget(cfg.params, basis, opt);
  for (const auto& w : budget.warnings) warnings.push_back("coherence: " + w);

  std::ostringstream csv;
  csv << "channel,Tphi_s,T1_s,T2_s,Gamma_1to0_per_s,Gamma_0up_per_s,"
         "Gamma_1up_per_s,status\n";
  for (const auto& c : budget.channels) {
    if (c.failed) channel_failure = true;
    const double t = c.time();
    csv << c.name << ',' << format_number(c.dephasing ? t : INFINITY) << ','
        << format_number(c.dephasing ? INFINITY : t) << ',' << format_number(INFINITY)
        << ',' << format_number(c.Gamma_1to0) << ',' << format_number(c.Gamma_0up)
        << ',' << format_number(c.Gamma_1up) << ','
        << (c.failed ? "failed" : (c.included ? "ok" : "excluded")) << '\n';
  }
  csv << "combined," << format_number(budget.Tphi()) << ','
      << format_number(budget.T1()) << ',' << format_number(budget.T2())
      << ",0.00000000000e+00,0.00000000000e+00,0.00000000000e+00,"
      << (channel_failure ? "failed" : "ok") << '\n';

  TaskOutput out;
  out.files.emplace_back("coherence.csv", csv.str());
  out.results["Tphi_s"] = budget.Tphi();
  out.results["T1_s"] = budget.T1();
  out.results["T2_s"] = budget.T2();
  return out;
}

TaskOutput run_purcell(const RunConfig& cfg, const BasisSpec& basis, json& warnings) {
  const DerivedEnergies de = derive_energies(cfg.params);
  const EigenSolution sol2d =
      lowest_eigenpairs(build_h_2d(cfg.params, basis), cfg.levels, cfg.eigen);
  const int k3 = heuristic_states_3d(cfg, de);
  const EigenSolution sol3d =
      lowest_eigenpairs(build_h_3d(cfg.params, basis), k3, cfg.eigen);
  const LabeledSpectrum labels = label_dressed(sol3d, sol2d, basis);

  ThermalEnv env;
  env.temperature = cfg.params.temperature;
  env.Omega_zeta = de.Omega_zeta;
  env.kappa_zeta = cfg.params.kappa_zeta;

  const Eigen::MatrixXcd g = coupling_matrix(sol2d, cfg.params, basis, cfg.levels);
  const PurcellResult exact =
      purcell_exact(labels, sol3d, basis, sol2d.eigenvalues.head(cfg.levels), env);
  const PurcellResult pert = purcell_perturbative(
      g, sol2d.eigenvalues.head(cfg.levels), de.Omega_zeta, env);
  for (const auto& w : exact.warnings) warnings.push_back("purcell: " + w);

  std::ostringstream csv;
  csv << "l,lp,Gamma_exact_per_s,Gamma_pert_per_s\n";
  for (int l = 0; l < cfg.levels; ++l)
    for (int lp = 0; lp < cfg.levels; ++lp) {
      if (l == lp) continue;
      csv << l << ',' << lp << ',' << format_number(exact.Gamma(l, lp)) << ','
          << format_number(pert.Gamma(l, lp)) << '\n';
    }

  TaskOutput out;
  out.files.emplace_back("purcell.csv", csv.str());
  out.results["Gamma1_exact_per_s"] = exact.Gamma1;
  out.results["Gamma1_pert_per_s"] = pert.Gamma1;
  return out;
}

TaskOutput run_validate(const RunConfig& cfg, const BasisSpec& basis, json& warnings,
                        std::ostream& log) {
  TaskOutput out;
  json checks = json::array();
  auto record = [&](const std::string& name, bool pass, const std::string& detail) {
    log << (pass ? "PASS" : "FAIL") << "  " << name
        << (detail.empty() ? "" : "  (" + detail + ")") << '\n';
    checks.push_back({{"name", name}, {"pass", pass}, {"detail", detail}});
    if (!pass) warnings.push_back("validate: " + name + " failed: " + detail);
  };

  // operator Hermiticity
  try {
    const auto h2 = build_h_2d(cfg.params, basis);
    const auto gI =
        build_noise_operator(cfg.params, basis, NoiseChannel::critical_current);
    const auto gF = build_noise_operator(cfg.params, basis, NoiseChannel::flux);
    double worst = std::max({hermiticity_defect(h2.mat), hermiticity_defect(gI.mat),
                             hermiticity_defect(gF.mat)});
    if (basis.n_zeta_max > 0)
      worst = std::max(worst, hermiticity_defect(build_h_3d(cfg.params, basis).mat));
    record("hermiticity", worst < 1e-12, "max defect " + format_number(worst));
  } catch (const std::exception& e) {
    record("hermiticity", false, e.what());
  }

  // sparse-vs-dense oracle on a reduced problem
  try {
    BasisSpec small = basis;
    small.n_theta_max = std::min(small.n_theta_max, 5);
    small.phi_points = std::min(small.phi_points, 41);
    const auto h = build_h_2d(cfg.params, small);
    const EigenSolution sparse = lowest_eigenpairs(h, 4, cfg.eigen);
    const EigenSolution dense = dense_oracle(h);
    double rel = 0.0;
    const double scale = std::max(1.0, dense.eigenvalues.cwiseAbs().maxCoeff());
    for (int i = 0; i < 4; ++i)
      rel = std::max(rel,
                     std::abs(sparse.eigenvalues(i) - dense.eigenvalues(i)) / scale);
    record("sparse_vs_dense", rel < 1e-9, "max relative gap " + format_number(rel));
  } catch (const std::exception& e) {
    record("sparse_vs_dense", false, e.what());
  }

  // cutoff-doubling convergence of the low 2d gaps
  try {
    const auto h = build_h_2d(cfg.params, basis);
    const EigenSolution base = lowest_eigenpairs(h, 3, cfg.eigen);
    BasisSpec big = basis;
    big.n_theta_max = basis.n_theta_max + basis.n_theta_max / 2 + 1;
    big.phi_points = 2 * basis.phi_points - 1;
    const EigenSolution refined =
        lowest_eigenpairs(build_h_2d(cfg.params, big), 3, cfg.eigen);
    const double g0 = base.eigenvalues(2) - base.eigenvalues(0);
    const double g1 = refined.eigenvalues(2) - refined.eigenvalues(0);
    const double drift = std::abs(g1 - g0) / std::max(std::abs(g1), 1e-12);
    record("cutoff_doubling", drift < 1e-3,
           "E2-E0 drift " + format_number(drift) +
               (drift < 1e-3 ? "" : "; increase n_theta_max/phi_points"));
  } catch (const std::exception& e) {
    record("cutoff_doubling", false, e.what());
  }

  // tensor-sum identity at zero capacitive/inductive disorder
  try {
    if (cfg.params.dC == 0.0 && cfg.params.dEL == 0.0 && basis.n_zeta_max >= 2) {
      const DerivedEnergies de = derive_energies(cfg.params);
      BasisSpec small = basis;
      small.n_theta_max = std::min(small.n_theta_max, 5);
      small.phi_points = std::min(small.phi_points, 41);
      small.n_zeta_max = 2;
      const EigenSolution s2 =
          lowest_eigenpairs(build_h_2d(cfg.params, small), 2, cfg.eigen);
      const EigenSolution s3 =
          lowest_eigenpairs(build_h_3d(cfg.params, small), 2, cfg.eigen);
      const double gap = std::abs(s3.eigenvalues(0) - s2.eigenvalues(0));
      record("tensor_sum", gap < 1e-8, "|E0_3d - E0_2d| = " + format_number(gap));
    } else if (basis.n_zeta_max == 0 &&
               (cfg.params.dC != 0.0 || cfg.params.dEL != 0.0)) {
      record("tensor_sum", false,
             "n_zeta_max = 0 with nonzero dC/dEL discards the zeta coupling");
    } else {
      record("tensor_sum", true, "skipped: disorder couples the zeta mode");
    }
  } catch (const std::exception& e) {
    record("tensor_sum", false, e.what());
  }

  out.results["checks"] = checks;
  return out;
}

}  // namespace

void write_gnuplot_scripts(const std::string& out_dir) {
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  atomic_write(dir / "spectrum.gp",
               "set datafile separator ','\n"
               "set xlabel 'sweep parameter'\n"
               "set ylabel 'E/h (GHz)'\n"
               "set key off\n"
               "plot 'spectrum.csv' using 1:5 every ::1 with points pt 7 ps 0.3\n");
  atomic_write(dir / "coherence.gp",
               "set datafile separator ','\n"
               "set style data histogram\n"
               "set logscale y\n"
               "set ylabel 'time (s)'\n"
               "set xtics rotate by -30\n"
               "plot 'coherence.csv' using 2:xtic(1) every ::1 title 'T_phi', \\\n"
               "     '' using 3 every ::1 title 'T_1'\n");
  atomic_write(dir / "purcell.gp",
               "set datafile separator ','\n"
               "set logscale y\n"
               "set xlabel 'transition'\n"
               "set ylabel 'rate (1/s)'\n"
               "plot 'purcell.csv' using 0:3 every ::1 title 'exact', \\\n"
               "     '' using 0:4 every ::1 title 'perturbative'\n");
}

int run(const RunConfig& config, std::ostream& log) {
  try {
    config.validate();
  } catch (const std::exception& e) {
    log << "configuration error: " << e.what() << '\n';
    return 2;
  }

  json manifest;
  manifest["version"] = kVersion;
  manifest["task"] = task_name(config.task);
  manifest["config"] = config_echo(config);
  json warnings = json::array();
  json timings;

  int code = 0;
  TaskOutput output;
  bool channel_failure = false;
  try {
    const BasisSpec basis = default_basis(config.params, config.basis);
    manifest["config"]["phi_points"] = basis.phi_points;
    manifest["config"]["phi_max"] = basis.phi_max;
    {
      StageClock clock(timings, "compute");
      switch (config.task) {
        case Task::spectrum:
          output = run_spectrum(config, basis, warnings);
          break;
        case Task::sweep:
          output = run_sweep(config, basis, warnings);
          break;
        case Task::dispersive:
          output = run_dispersive(config, basis, warnings);
          break;
        case Task::coherence:
          output = run_coherence(config, basis, warnings, channel_failure);
          break;
        case Task::purcell:
          output = run_purcell(config, basis, warnings);
          break;
        case Task::validate:
          output = run_validate(config, basis, warnings, log);
          break;
      }
    }
  } catch (const DomainError& e) {
    log << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const ResourceError& e) {
    log << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    log << "computation failed: " << e.what() << '\n';
    manifest["error"] = e.what();
    code = 3;
  }
  if (channel_failure && code == 0) code = 3;

  try {
    fs::create_directories(config.out_dir);
    StageClock clock(timings, "write");
    json files = json::array();
    if (config.write_csv) {
      for (const auto& [name, content] : output.files) {
        atomic_write(fs::path(config.out_dir) / name, content);
        files.push_back(name);
      }
    }
    manifest["results"] = output.results;
    manifest["warnings"] = warnings;
    manifest["files"] = files;
    manifest["exit_code"] = code;
    manifest["timings_s"] = timings;
    if (config.write_json) {
      atomic_write(fs::path(config.out_dir) / "manifest.json",
                   manifest.dump(2) + "\n");
    }
  } catch (const std::exception& e) {
    log << "output error: " << e.what() << '\n';
    return 3;
  }

  if (code == 0)
    log << "done: " << task_name(config.task) << " -> " << config.out_dir << '\n';
  return code;
}

}  // namespace zeropi
