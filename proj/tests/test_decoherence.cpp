#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "zeropi/decoherence.hpp"
#include "zeropi/dispersive.hpp"

using namespace zeropi;

namespace {

CircuitParams tiny_params() {
  CircuitParams p;
  p.EC = 0.04;
  p.ECJ = 20.0;
  p.EJ = 10.0;
  p.EL = 0.04;
  p.dC = 0.05;
  p.dCJ = 0.05;
  p.dEJ = 0.05;
  p.dEL = 0.05;
  p.flux = 0.17;
  p.ng_theta = 0.30;
  return p;
}

BasisSpec tiny_basis() {
  BasisSpec b;
  b.n_theta_max = 3;
  b.phi_points = 25;
  b.phi_max = 3.0;
  b.n_zeta_max = 3;
  return b;
}

}  // namespace

TEST_CASE("thermal occupation of the three reference zeta modes") {
  // published: 8.25, 2.29, 0.39 at 15 mK
  const double n1 = thermal_occupation(std::sqrt(8 * 0.02 * 0.008), 0.015);
  const double n2 = thermal_occupation(std::sqrt(8 * 0.04 * 0.04), 0.015);
  const double n3 = thermal_occupation(std::sqrt(8 * 0.15 * 0.13), 0.015);
  CHECK(n1 == doctest::Approx(8.245555064).epsilon(1e-8));
  CHECK(n2 == doctest::Approx(2.292670947).epsilon(1e-8));
  CHECK(n3 == doctest::Approx(0.3939353356).epsilon(1e-8));
  CHECK(n1 == doctest::Approx(8.25).epsilon(0.03));
  CHECK(n2 == doctest::Approx(2.29).epsilon(0.03));
  CHECK(n3 == doctest::Approx(0.39).epsilon(0.03));
  CHECK(thermal_occupation(0.113, 0.0) == 0.0);
  CHECK_THROWS_AS(thermal_occupation(-0.1, 0.015), DomainError);
}

TEST_CASE("thermal weights are a normalized decreasing ladder") {
  ThermalEnv env;
  env.temperature = 0.015;
  env.Omega_zeta = 0.113;
  double coverage = 0.0;
  const auto w = env.weights(8, &coverage);
  double sum = 0.0;
  for (size_t i = 0; i < w.size(); ++i) {
    sum += w[i];
    if (i > 0) CHECK(w[i] < w[i - 1]);
  }
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(coverage < 1.0);
  CHECK(coverage > 0.9);

  env.temperature = 0.0;
  const auto w0 = env.weights(4);
  CHECK(w0[0] == 1.0);
  CHECK(w0[1] == 0.0);
}

TEST_CASE("1/f dephasing time against the scalar oracle") {
  NoiseCutoffs cut;  // 1 Hz / 3 GHz / 10 us defaults
  const double d1 = constants::two_pi * 1e6;
  CHECK(tphi_1f(d1, 0.0, 1e-6, cut) ==
        doctest::Approx(0.036180832933116).epsilon(1e-12));
  CHECK(tphi_1f(d1, constants::two_pi * 1e9, 1e-6, cut) ==
        doctest::Approx(0.036179592556831).epsilon(1e-12));
  CHECK(std::isinf(tphi_1f(0.0, 0.0, 1e-6, cut)));
  // second-order-only channel scales as 1/A^2
  const double ta = tphi_1f(0.0, 1e9, 1e-6, cut);
  const double tb = tphi_1f(0.0, 1e9, 2e-6, cut);
  CHECK(ta / tb == doctest::Approx(4.0).epsilon(1e-12));
  NoiseCutoffs bad = cut;
  bad.t_meas = 1.0;  // omega_ir * t >= 1
  CHECK_THROWS_AS(tphi_1f(d1, 0.0, 1e-6, bad), DomainError);
}

TEST_CASE("smooth-spectrum dephasing time") {
  CHECK(tphi_smooth(1.0, std::sqrt(2.0), 1.0, 1.0) == doctest::Approx(2.0));
  CHECK(tphi_smooth(2.0, 1.0, 3.0, 0.0) == doctest::Approx(4.0 / (2.0 * 9.0)));
  CHECK(std::isinf(tphi_smooth(1.0, 1.0, 0.0, 0.0)));
  CHECK(std::isinf(tphi_smooth(0.0, 1.0, 1.0, 1.0)));
}

TEST_CASE("shot-noise rate against the scalar oracle") {
  CHECK(shot_noise_rate(1e-4, 1e4, 2.29).rate ==
        doctest::Approx(22873.467867465).epsilon(1e-10));
  CHECK(shot_noise_rate(1e-7, 1e6, 1.0).rate ==
        doctest::Approx(3.1582185491263).epsilon(1e-10));
  CHECK(shot_noise_rate(0.0, 1e4, 2.0).rate == 0.0);
  const double zero_n = shot_noise_rate(1e-3, 1e4, 0.0).rate;
  CHECK(zero_n >= 0.0);
  CHECK(zero_n < 1e-6);
}

TEST_CASE("asymptotes bracket and approximate the full rate") {
  const double kappa = 1e4;
  const double n = 1.0;

  SUBCASE("small chi") {
    const double chi = 1e-3 * kappa / constants::GHz_to_rad_per_s;
    const auto full = shot_noise_rate(chi, kappa, n);
    const auto asym = shot_noise_asymptotes(chi, kappa, n);
    CHECK(full.rate == doctest::Approx(asym.small_chi).epsilon(0.01));
    CHECK(full.regime == ShotNoiseRegime::small_chi);
  }
  SUBCASE("large chi") {
    const double chi = 1e3 * kappa / constants::GHz_to_rad_per_s;
    const auto full = shot_noise_rate(chi, kappa, n);
    const auto asym = shot_noise_asymptotes(chi, kappa, n);
    CHECK(full.rate == doctest::Approx(asym.large_chi).epsilon(0.01));
    CHECK(full.regime == ShotNoiseRegime::large_chi);
  }
  SUBCASE("sandwich at the extremes") {
    for (double ratio : {1e-4, 1e-3, 1e2, 1e4}) {
      const double chi = ratio * kappa / constants::GHz_to_rad_per_s;
      const auto full = shot_noise_rate(chi, kappa, n);
      const auto asym = shot_noise_asymptotes(chi, kappa, n);
      const double lo = std::min(asym.small_chi, asym.large_chi);
      CHECK(full.rate >= 0.9 * lo);
      CHECK(full.rate <= 1.05 * lo);
    }
  }
  SUBCASE("monotone in n_th") {
    double prev = -1.0;
    for (double nth = 0.0; nth <= 4.0; nth += 0.5) {
      const double r = shot_noise_rate(2e-5, kappa, nth).rate;
      CHECK(r >= prev);
      prev = r;
    }
  }
}

TEST_CASE("noise spectra: shapes, cutoffs and detailed balance") {
  NoiseCutoffs cut;
  const auto f = NoiseSpectrum::one_over_f(1.0, cut);
  CHECK(f.value(constants::two_pi * 100.0) ==
        doctest::Approx(constants::two_pi / (constants::two_pi * 100.0)));
  CHECK(f.value(-constants::two_pi * 100.0) == f.value(constants::two_pi * 100.0));
  CHECK(f.value(0.01) == f.value(cut.omega_ir));  // infrared clamp
  CHECK(f.value(2.0 * cut.omega_uv) == 0.0);      // ultraviolet cutoff

  FluxLine line;  // M = 1000 Phi_0/A, R = 50 ohm
  const auto ohm = NoiseSpectrum::ohmic_fluxline(line, 0.015);
  const double w = constants::GHz_to_rad_per_s * 0.113;
  CHECK(ohm.value(w) == doctest::Approx(1.9742848986782e-20).epsilon(1e-10));
  CHECK(ohm.value(-w) == doctest::Approx(1.3752881571182e-20).epsilon(1e-10));
  const double hbar = constants::planck_J_s / constants::two_pi;
  CHECK(ohm.value(-w) / ohm.value(w) ==
        doctest::Approx(std::exp(-hbar * w / (1.380649e-23 * 0.015)))
            .epsilon(1e-12));

  const auto sm = NoiseSpectrum::smooth_gaussian(1e-6, 0.25);
  CHECK(sm.value(0.0) == doctest::Approx(std::sqrt(constants::two_pi) * 1e-6 * 0.25));
  CHECK(sm.value(1e7) < sm.value(0.0));
}

TEST_CASE("golden-rule rate on stub systems") {
  // unit matrix element, 1/f spectrum with A = 1 at 1 GHz
  std::vector<Eigen::Triplet<std::complex<double>>> trips;
  trips.emplace_back(0, 1, 1.0);
  trips.emplace_back(1, 0, 1.0);
  const auto G = HermitianOperator::from_triplets(2, BasisTag::theta_phi, trips);
  Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(2), e1 = Eigen::VectorXcd::Zero(2);
  e0(0) = 1.0;
  e1(1) = 1.0;
  const auto S = NoiseSpectrum::one_over_f(1.0, {});
  const double w = constants::GHz_to_rad_per_s;  // 1 GHz downward
  const double expected = constants::GHz_to_rad_per_s *
                          constants::GHz_to_rad_per_s *
                          (constants::two_pi / w);
  CHECK(golden_rule_rate(G, e1, e0, -w, S) == doctest::Approx(expected).epsilon(1e-12));
  // orthogonal-support protection: zero matrix element, zero rate
  CHECK(golden_rule_rate(G, e0, e0, -w, S) == 0.0);
}

TEST_CASE("golden-rule rate on the tiny 3d system matches numpy") {
  const CircuitParams p = tiny_params();
  const BasisSpec b = tiny_basis();
  const auto sol3 = dense_oracle(build_h_3d(p, b));
  const auto G3 = promote_to_3d(
      build_noise_operator(p, b, NoiseChannel::critical_current), b);
  const auto S = NoiseSpectrum::one_over_f(1e-7, {});
  const double om = constants::GHz_to_rad_per_s *
                    (sol3.eigenvalues(5) - sol3.eigenvalues(0));
  const double rate = golden_rule_rate(G3, sol3.eigenvectors.col(0),
                                       sol3.eigenvectors.col(5), om, S);
  CHECK(rate == doctest::Approx(1.6057744592342e-09).epsilon(1e-9));
}

TEST_CASE("composite depolarization reduces to plain golden rule when zeta decouples") {
  CircuitParams p = tiny_params();
  p.dC = 0.0;
  p.dEL = 0.0;
  const BasisSpec b = tiny_basis();
  const DerivedEnergies de = derive_energies(p);

  const auto sol2 = dense_oracle(build_h_2d(p, b));
  const auto sol3 = dense_oracle(build_h_3d(p, b));
  const LabeledSpectrum labels = label_dressed(sol3, sol2, b);
  const auto G2 = build_noise_operator(p, b, NoiseChannel::critical_current);
  const auto G3 = promote_to_3d(G2, b);
  const auto S = NoiseSpectrum::one_over_f(1e-7, {});

  ThermalEnv env;
  env.temperature = 0.015;
  env.Omega_zeta = de.Omega_zeta;

  const auto dep = composite_depolarization(labels, sol3, G3, S, env);

  // the zeta-trivial operator only connects n' = n, so the thermal sum
  // collapses onto the bare 2d rates
  double expected_1to0 = golden_rule_rate(
      G2, sol2.eigenvectors.col(1), sol2.eigenvectors.col(0),
      constants::GHz_to_rad_per_s * (sol2.eigenvalues(0) - sol2.eigenvalues(1)), S);
  CHECK(dep.Gamma_1to0 == doctest::Approx(expected_1to0).epsilon(1e-6));
  CHECK(dep.Gamma1 ==
        doctest::Approx(dep.Gamma_1to0 + dep.Gamma_0up + dep.Gamma_1up));
}

TEST_CASE("composite rates are temperature independent for flat spectra") {
  // with S constant and a zeta-trivial operator the P(n) sum telescopes
  CircuitParams p = tiny_params();
  p.dC = 0.0;
  p.dEL = 0.0;
  const BasisSpec b = tiny_basis();
  const DerivedEnergies de = derive_energies(p);
  const auto sol2 = dense_oracle(build_h_2d(p, b));
  const auto sol3 = dense_oracle(build_h_3d(p, b));
  const LabeledSpectrum labels = label_dressed(sol3, sol2, b);
  const auto G3 = promote_to_3d(
      build_noise_operator(p, b, NoiseChannel::critical_current), b);
  // t_c^2 underflows to zero, so the Gaussian is exactly flat in omega
  const NoiseSpectrum flat = NoiseSpectrum::smooth_gaussian(1e-200, 1.0);

  ThermalEnv cold, warm;
  cold.temperature = 0.005;
  warm.temperature = 0.030;
  cold.Omega_zeta = warm.Omega_zeta = de.Omega_zeta;

  const auto a = composite_depolarization(labels, sol3, G3, flat, cold);
  const auto c = composite_depolarization(labels, sol3, G3, flat, warm);
  CHECK(a.Gamma1 == doctest::Approx(c.Gamma1).epsilon(1e-6));
}

TEST_CASE("perturbative Purcell rate on a single pair") {
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(2, 2);
  g(0, 1) = g(1, 0) = 0.001;
  Eigen::VectorXd energies(2);
  energies << 0.0, 0.15;
  ThermalEnv env;
  env.kappa_zeta = 1e4;
  // pick the temperature that makes n_th(0.15 GHz) exactly 1
  env.temperature = 0.15 / (constants::kB_over_h_GHz_per_K * std::log(2.0));
  env.Omega_zeta = 0.05;

  const auto pr = purcell_perturbative(g, energies, 0.05, env);
  // downward 1 -> 0: kappa (1 + n) g^2 / (E1 - E0 - Omega)^2 = 2.0 / s
  CHECK(pr.Gamma(1, 0) == doctest::Approx(2.0).epsilon(1e-9));
  // upward 0 -> 1: kappa n g^2 / (E0 - E1 + Omega)^2 = 1.0 / s
  CHECK(pr.Gamma(0, 1) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(pr.Gamma1 == doctest::Approx(2.0).epsilon(1e-9));

  // resonance guard
  Eigen::VectorXd res(2);
  res << 0.0, 0.05;
  CHECK_THROWS_AS(purcell_perturbative(g, res, 0.05, env), ResonanceError);

  // zero coupling, zero rates
  const auto zero =
      purcell_perturbative(Eigen::MatrixXcd::Zero(2, 2), energies, 0.05, env);
  CHECK(zero.Gamma1 == 0.0);
}

TEST_CASE("exact and perturbative Purcell agree in the dispersive regime") {
  const CircuitParams p = tiny_params();
  const BasisSpec b = tiny_basis();
  const DerivedEnergies de = derive_energies(p);
  const auto sol2 = dense_oracle(build_h_2d(p, b));
  const auto sol3 = dense_oracle(build_h_3d(p, b));
  const LabeledSpectrum labels = label_dressed(sol3, sol2, b);

  ThermalEnv env;
  env.temperature = 0.015;
  env.Omega_zeta = de.Omega_zeta;
  env.kappa_zeta = 1e4;

  const Eigen::MatrixXcd g = coupling_matrix(sol2, p, b, 2);
  const Eigen::VectorXd eq = sol2.eigenvalues.head(2);
  const auto exact = purcell_exact(labels, sol3, b, eq, env);
  const auto pert = purcell_perturbative(g, eq, de.Omega_zeta, env);
  CHECK(exact.Gamma(1, 0) == doctest::Approx(pert.Gamma(1, 0)).epsilon(0.2));
  CHECK(exact.Gamma(0, 1) == doctest::Approx(pert.Gamma(0, 1)).epsilon(0.2));
}

TEST_CASE("purcell rates vanish when the zeta mode is decoupled") {
  CircuitParams p = tiny_params();
  p.dC = 0.0;
  p.dEL = 0.0;
  const BasisSpec b = tiny_basis();
  const DerivedEnergies de = derive_energies(p);
  const auto sol2 = dense_oracle(build_h_2d(p, b));
  const auto sol3 = dense_oracle(build_h_3d(p, b));
  const LabeledSpectrum labels = label_dressed(sol3, sol2, b);
  ThermalEnv env;
  env.temperature = 0.015;
  env.Omega_zeta = de.Omega_zeta;
  const auto exact = purcell_exact(labels, sol3, b, sol2.eigenvalues.head(2), env);
  CHECK(exact.Gamma1 < 1e-20);
}

TEST_CASE("coherence budget wiring on the tiny system") {
  const CircuitParams p = tiny_params();
  const BasisSpec b = tiny_basis();
  BudgetOptions opt;
  opt.levels = 3;
  opt.states_3d = 10;
  const RateBreakdown budget = coherence_budget(p, b, opt);

  REQUIRE(budget.channels.size() == 8);
  CHECK_FALSE(budget.any_failed());
  const auto* charge = budget.find("charge_1f_dephasing");
  REQUIRE(charge != nullptr);
  CHECK_FALSE(charge->included);  // excluded from combined sums by default
  CHECK(budget.Tphi() > 0.0);
  CHECK(budget.T1() > 0.0);
  // 1/T2 = 1/(2 T1) + 1/Tphi
  CHECK(1.0 / budget.T2() ==
        doctest::Approx(0.5 / budget.T1() + 1.0 / budget.Tphi()).epsilon(1e-12));
  // combined dephasing rate is the sum over included dephasing channels
  double sum = 0.0;
  for (const auto& c : budget.channels)
    if (c.dephasing && c.included) sum += c.rate;
  CHECK(budget.Gamma_phi == doctest::Approx(sum));
}
