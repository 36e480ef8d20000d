// Acceptance gate: one criterion per test case, one summary line per
// criterion on stdout.  Numeric targets are the published working points for
// the three parameter sets PS1/PS2/PS3.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "zeropi/circuit.hpp"
#include "zeropi/decoherence.hpp"
#include "zeropi/dispersive.hpp"
#include "zeropi/eigensolver.hpp"
#include "zeropi/noise.hpp"
#include "zeropi/params.hpp"
#include "zeropi/spectrum.hpp"

using namespace zeropi;

namespace {

CircuitParams param_set(int which) {
  CircuitParams p;
  switch (which) {
    case 1: p.EC = 0.02; p.ECJ = 20.0; p.EJ = 10.0; p.EL = 0.008; break;
    case 2: p.EC = 0.04; p.ECJ = 20.0; p.EJ = 10.0; p.EL = 0.04; break;
    case 3: p.EC = 0.15; p.ECJ = 10.0; p.EJ = 5.0; p.EL = 0.13; break;
    default: throw std::logic_error("bad set");
  }
  p.dC = p.dCJ = p.dEJ = p.dEL = 0.05;
  return p;
}

BasisSpec make_basis(int nt, int pp, double pm, int nz = 0) {
  BasisSpec b;
  b.n_theta_max = nt;
  b.phi_points = pp;
  b.phi_max = pm;
  b.n_zeta_max = nz;
  return b;
}

bool within(double value, double target, double rel) {
  return std::abs(value - target) <= rel * std::abs(target);
}

bool within_factor(double value, double target, double factor) {
  return value > 0.0 && value <= target * factor && value >= target / factor;
}

void report(int criterion, bool ok, const std::string& detail) {
  std::printf("[criterion %d] %s - %s\n", criterion, ok ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
  CHECK_MESSAGE(ok, "criterion ", criterion, ": ", detail);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

// chi01 of the 2d problem at the given working point
DispersiveReport dispersive_report(const CircuitParams& p, const BasisSpec& b,
                                   int levels) {
  const DerivedEnergies d = derive_energies(p);
  const EigenSolution sol = lowest_eigenpairs(build_h_2d(p, b), levels);
  const Eigen::MatrixXcd g = coupling_matrix(sol, p, b, levels);
  return stark_lamb(g, sol.eigenvalues, d.Omega_zeta, levels);
}

}  // namespace

TEST_CASE("criterion 1: zeta-mode frequencies") {
  const double targets[3] = {0.036, 0.113, 0.395};  // GHz
  bool ok = true;
  std::string detail = "Omega_zeta/2pi GHz:";
  for (int s = 1; s <= 3; ++s) {
    const double om = derive_energies(param_set(s)).Omega_zeta;
    ok = ok && within(om, targets[s - 1], 0.01);
    detail += fmt(" %.6f", om);
  }
  report(1, ok, detail);
}

TEST_CASE("criterion 2: thermal occupations at 15 mK") {
  const double targets[3] = {8.25, 2.29, 0.39};
  bool ok = true;
  std::string detail = "n_th:";
  for (int s = 1; s <= 3; ++s) {
    const double n =
        thermal_occupation(derive_energies(param_set(s)).Omega_zeta, 0.015);
    ok = ok && within(n, targets[s - 1], 0.03);
    detail += fmt(" %.4f", n);
  }
  report(2, ok, detail);
}

TEST_CASE("criterion 3: PS1 spectrum with cutoff-doubling stability") {
  const auto t0 = std::chrono::steady_clock::now();
  CircuitParams p = param_set(1);
  p.dEL = 0.0;
  p.dC = 0.0;

  auto gaps = [&](const BasisSpec& b) {
    const EigenSolution sol = lowest_eigenpairs(build_h_2d(p, b), 3);
    return std::pair<double, double>{sol.eigenvalues(1) - sol.eigenvalues(0),
                                     sol.eigenvalues(2) - sol.eigenvalues(0)};
  };
  const auto [split, e20] = gaps(make_basis(10, 281, 28.0));
  const auto [split_nt, e20_nt] = gaps(make_basis(20, 281, 28.0));   // theta x2
  const auto [split_pp, e20_pp] = gaps(make_basis(10, 561, 28.0));   // phi x2

  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0).count();
  bool ok = within(e20, 0.792, 0.05);
  ok = ok && within_factor(split, 24e-6, 2.0);
  // stability: both doubled cutoffs stay inside the factor-2 band and close
  // to the base value
  ok = ok && within_factor(split_nt, 24e-6, 2.0) && within_factor(split_pp, 24e-6, 2.0);
  ok = ok && within_factor(split_nt, split, 1.5) && within_factor(split_pp, split, 1.5);
  ok = ok && secs <= 600.0;
  report(3, ok,
         "E2-E0 = " + fmt("%.4f", e20) + " GHz, E1-E0 = " + fmt("%.3f", split * 1e6) +
             " kHz (theta x2: " + fmt("%.3f", split_nt * 1e6) + ", phi x2: " +
             fmt("%.3f", split_pp * 1e6) + "), " + fmt("%.0f s", secs));
}

TEST_CASE("criterion 4: PS2 shot-noise plateau") {
  const CircuitParams p = param_set(2);
  const BasisSpec b = make_basis(8, 251, 25.0);
  const double n_th = thermal_occupation(derive_energies(p).Omega_zeta, 0.015);

  const DispersiveReport rep0 = dispersive_report(p, b, 10);
  const ShotNoiseResult full0 = shot_noise_rate(rep0.chi01, p.kappa_zeta, n_th);
  const double T_regime =
      1.0 / shot_noise_asymptotes(rep0.chi01, p.kappa_zeta, n_th).large_chi;

  CircuitParams p15 = p;
  p15.flux = 0.15;
  const DispersiveReport rep15 = dispersive_report(p15, b, 10);
  const ShotNoiseResult full15 = shot_noise_rate(rep15.chi01, p.kappa_zeta, n_th);

  // away from half flux the rate saturates at its large-chi value; compare
  // that regime's prediction against the 43 us target and require the exact
  // rate to sit on a flat plateau there
  bool ok = full0.regime == ShotNoiseRegime::large_chi;
  ok = ok && within(T_regime, 43e-6, 0.10);
  ok = ok && within(1.0 / full15.rate, 1.0 / full0.rate, 0.10);
  report(4, ok,
         "saturated T_phi = " + fmt("%.2f", T_regime * 1e6) + " us, exact " +
             fmt("%.2f", 1e6 / full0.rate) + " us (flux 0) / " +
             fmt("%.2f", 1e6 / full15.rate) + " us (flux 0.15)");
}

TEST_CASE("criterion 5: shot-noise minimum under an EL sweep") {
  const std::vector<double> grid = {0.005, 0.008, 0.012, 0.02, 0.03,
                                    0.042, 0.06, 0.08, 0.12, 0.18};
  std::vector<double> T_full, T_small, T_large;
  for (const double EL : grid) {
    CircuitParams p = param_set(2);
    p.EL = EL;
    BasisSpec b = make_basis(8, 0, 0.0);
    b = default_basis(p, b);
    const double Om = derive_energies(p).Omega_zeta;
    const double n_th = thermal_occupation(Om, 0.015);
    const DispersiveReport rep = dispersive_report(p, b, 10);
    T_full.push_back(1.0 / shot_noise_rate(rep.chi01, p.kappa_zeta, n_th).rate);
    const auto asym = shot_noise_asymptotes(rep.chi01, p.kappa_zeta, n_th);
    T_small.push_back(1.0 / asym.small_chi);
    T_large.push_back(1.0 / asym.large_chi);
  }
  const auto it = std::min_element(T_full.begin(), T_full.end());
  const std::size_t imin = static_cast<std::size_t>(it - T_full.begin());
  // single minimum: strictly decreasing before, strictly increasing after
  bool unimodal = true;
  for (std::size_t i = 0; i + 1 < T_full.size(); ++i) {
    if (i < imin && !(T_full[i] > T_full[i + 1])) unimodal = false;
    if (i >= imin && !(T_full[i] < T_full[i + 1])) unimodal = false;
  }
  bool ok = unimodal && grid[imin] >= 0.02 && grid[imin] <= 0.08;
  // small-EL extreme sits in the small-chi regime, large-EL in the large-chi
  ok = ok && within(T_full.front(), T_small.front(), 0.10);
  ok = ok && within(T_full.back(), T_large.back(), 0.10);
  report(5, ok,
         "minimum at EL = " + fmt("%.3f", grid[imin]) + " GHz (T_phi = " +
             fmt("%.1f", *it * 1e6) + " us), extremes " +
             fmt("%.1f", T_full.front() * 1e3) + " ms / " +
             fmt("%.1f", T_full.back() * 1e6) + " us vs asymptotes " +
             fmt("%.1f", T_small.front() * 1e3) + " ms / " +
             fmt("%.1f", T_large.back() * 1e6) + " us");
}

TEST_CASE("criterion 6: combined working-point budgets at flux = 0") {
  struct Case {
    int set;
    BasisSpec basis;
    int levels;
    double coverage;
    double Tphi_target, T1_target, factor;
  };
  const std::vector<Case> cases = {
      {2, make_basis(8, 251, 25.0, 22), 5, 0.999, 50e-6, 0.5, 3.0},
      {3, make_basis(8, 141, 14.0, 8), 12, 0.95, 200e-6, 0.04, 3.0},
      {1, make_basis(12, 281, 28.0, 12), 5, 0.70, 20e-3, 10.0, 5.0},
  };
  for (const auto& c : cases) {
    const CircuitParams p = param_set(c.set);
    BudgetOptions opt;
    opt.levels = c.levels;
    opt.zeta_coverage = c.coverage;
    const RateBreakdown out = coherence_budget(p, c.basis, opt);
    const bool ok_phi = within_factor(out.Tphi(), c.Tphi_target, c.factor);
    const bool ok_t1 = within_factor(out.T1(), c.T1_target, c.factor);
    report(6, ok_phi && ok_t1,
           "PS" + std::to_string(c.set) + ": T_phi = " + fmt("%.3e", out.Tphi()) +
               " s (target " + fmt("%.0e", c.Tphi_target) + "), T_1 = " +
               fmt("%.3e", out.T1()) + " s (target " + fmt("%.0e", c.T1_target) +
               "), factor " + fmt("%.0f", c.factor));
  }
}

TEST_CASE("criterion 7: Purcell exact vs perturbative across a PS2 flux grid") {
  const BasisSpec b = make_basis(6, 121, 12.0, 8);
  const int levels = 3;
  bool ok = true;
  int tested = 0, excluded = 0, failing = 0;
  double worst = 0.0, worst_flux = 0.0;
  for (int i = 0; i <= 20; ++i) {
    CircuitParams p = param_set(2);
    p.flux = 0.5 * i / 20.0;
    const DerivedEnergies d = derive_energies(p);
    ThermalEnv env;
    env.Omega_zeta = d.Omega_zeta;
    const EigenSolution sol2d = lowest_eigenpairs(build_h_2d(p, b), levels);
    const Eigen::MatrixXcd g = coupling_matrix(sol2d, p, b, levels);
    const DispersiveReport rep = stark_lamb(g, sol2d.eigenvalues, d.Omega_zeta, levels);
    if (rep.max_g_over_Delta >= 0.1 || !rep.excluded_pairs.empty()) {
      ++excluded;
      continue;
    }
    const EigenSolution sol3d = lowest_eigenpairs(build_h_3d(p, b), 33);
    const LabeledSpectrum labels = label_dressed(sol3d, sol2d, b);
    const PurcellResult ex =
        purcell_exact(labels, sol3d, b, sol2d.eigenvalues.head(levels), env);
    const PurcellResult pe =
        purcell_perturbative(g, sol2d.eigenvalues.head(levels), d.Omega_zeta, env);
    ++tested;
    const double rel = std::abs(ex.Gamma1 - pe.Gamma1) / pe.Gamma1;
    if (rel > worst) {
      worst = rel;
      worst_flux = p.flux;
    }
    if (rel > 0.20) ++failing;
    ok = ok && rel <= 0.20;
  }
  report(7, ok && tested > 0,
         fmt("%.0f", double(tested)) + " dispersive points (" +
             fmt("%.0f", double(excluded)) + " excluded by g/Delta >= 0.1), " +
             fmt("%.0f", double(failing)) + " beyond 20%, worst Gamma_1 deviation " +
             fmt("%.0f", worst * 100.0) + "% at flux " + fmt("%.3f", worst_flux));
}

TEST_CASE("criterion 8: property suite") {
  bool ok = true;
  std::string detail;

  CircuitParams p = param_set(2);
  p.flux = 0.17;
  p.ng_theta = 0.30;
  const BasisSpec tiny = make_basis(3, 25, 3.0, 3);

  // hermiticity of all assembled operators
  const HermitianOperator h2 = build_h_2d(p, tiny);
  const HermitianOperator h3 = build_h_3d(p, tiny);
  const HermitianOperator gI = build_noise_operator(p, tiny, NoiseChannel::critical_current);
  const HermitianOperator gF = build_noise_operator(p, tiny, NoiseChannel::flux);
  for (const auto* op : {&h2, &h3, &gI, &gF})
    ok = ok && hermiticity_defect(op->mat) < kHermiticityTol;
  if (!ok) detail += " hermiticity";

  // sparse vs dense eigenvalues
  {
    const EigenSolution sparse = lowest_eigenpairs(h3, 6);
    const EigenSolution dense = dense_oracle(h3);
    bool sub = true;
    const double scale = std::max(1.0, dense.eigenvalues.cwiseAbs().maxCoeff());
    for (int i = 0; i < 6; ++i)
      sub = sub && std::abs(sparse.eigenvalues(i) - dense.eigenvalues(i)) < 1e-9 * scale;
    if (!sub) detail += " sparse-vs-dense";
    ok = ok && sub;
  }

  // tensor-sum identity without zeta-coupling disorder
  {
    CircuitParams pd = p;
    pd.dC = 0.0;
    pd.dEL = 0.0;
    const double Om = derive_energies(pd).Omega_zeta;
    const EigenSolution s2 = lowest_eigenpairs(build_h_2d(pd, tiny), 2);
    const EigenSolution s3 = lowest_eigenpairs(build_h_3d(pd, tiny), 6);
    bool sub = true;
    for (int l = 0; l < 2; ++l)
      for (int n = 0; n < 2; ++n) {
        const double want = s2.eigenvalues(l) + Om * n;
        bool found = false;
        for (int i = 0; i < 6; ++i)
          found = found || std::abs(s3.eigenvalues(i) - want) < 1e-8;
        sub = sub && found;
      }
    if (!sub) detail += " tensor-sum";
    ok = ok && sub;
  }

  // chi01 vs 3d dressed-energy second difference
  {
    const BasisSpec bd = make_basis(3, 25, 3.0, 5);
    const double Om = derive_energies(p).Omega_zeta;
    const EigenSolution s2 = lowest_eigenpairs(build_h_2d(p, bd), 4);
    const Eigen::MatrixXcd g = coupling_matrix(s2, p, bd, 4);
    const DispersiveReport rep = stark_lamb(g, s2.eigenvalues, Om, 4);
    const EigenSolution s3 = lowest_eigenpairs(build_h_3d(p, bd), 12);
    const LabeledSpectrum lab = label_dressed(s3, s2, bd);
    auto E = [&](int l, int n) { return lab.states[lab.find(l, n)].energy; };
    const double second = 0.5 * (E(1, 1) - E(1, 0) - E(0, 1) + E(0, 0));
    const bool sub = within(second, rep.chi01, 0.05);
    if (!sub) detail += " chi01-vs-3d";
    ok = ok && sub;
  }

  // flux and charge sweet spots at the symmetry point
  {
    CircuitParams ps = param_set(2);  // flux = ng = 0
    const BasisSpec bs = make_basis(6, 101, 10.0);
    const DerivativeResult dflux =
        energy_derivatives(ps, bs, SweepParameter::flux);
    const DerivativeResult dng =
        energy_derivatives(ps, bs, SweepParameter::ng_theta);
    // |d1| should be noise-level relative to the curvature scale |d2|*step
    const bool sub = std::abs(dflux.d1) < 1e-3 * std::abs(dflux.d2) + 1.0 &&
                     std::abs(dng.d1) < 1e-3 * std::abs(dng.d2) + 1.0;
    if (!sub) detail += " sweet-spot";
    ok = ok && sub;
  }

  // shot-noise asymptote sandwich
  {
    bool sub = true;
    const double kappa = 1e4;
    for (const double ratio : {1e-4, 1e-3, 1e2, 1e4}) {  // chi/kappa, deep regimes
      const double chi = kappa * ratio / constants::GHz_to_rad_per_s;
      const double full = shot_noise_rate(chi, kappa, 2.0).rate;
      const auto asym = shot_noise_asymptotes(chi, kappa, 2.0);
      const double lo = std::min(asym.small_chi, asym.large_chi);
      sub = sub && full >= 0.9 * lo && full <= 1.05 * lo;
    }
    if (!sub) detail += " shot-noise-sandwich";
    ok = ok && sub;
  }

  // detailed balance of the ohmic spectrum
  {
    const NoiseSpectrum S = NoiseSpectrum::ohmic_fluxline(FluxLine{}, 0.015);
    bool sub = true;
    for (const double f_GHz : {0.05, 0.113, 1.0}) {
      const double w = constants::GHz_to_rad_per_s * f_GHz;
      const double beta_w = f_GHz / (constants::kB_over_h_GHz_per_K * 0.015);
      sub = sub && within(S.value(w) / S.value(-w), std::exp(beta_w), 1e-6);
    }
    if (!sub) detail += " detailed-balance";
    ok = ok && sub;
  }

  // determinism across worker counts
  {
    const std::vector<double> grid = {0.0, 0.1, 0.2, 0.3};
    SweepOptions one, four;
    four.workers = 4;
    const DispersionCurve a = sweep(p, tiny, SweepParameter::flux, grid, 3, one);
    const DispersionCurve c = sweep(p, tiny, SweepParameter::flux, grid, 3, four);
    bool sub = true;
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (std::size_t l = 0; l < 3; ++l)
        sub = sub && a.energies[i][l] == c.energies[i][l];
    if (!sub) detail += " determinism";
    ok = ok && sub;
  }

  report(8, ok, detail.empty() ? "all properties hold" : "failing:" + detail);
}
