#include "zeropi/decoherence.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "zeropi/dispersive.hpp"

namespace zeropi {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double thermal_occupation(double Omega_GHz, double temperature_K) {
  if (Omega_GHz <= 0.0) throw DomainError("Omega", "must be > 0");
  if (temperature_K < 0.0) throw DomainError("temperature", "must be >= 0");
  if (temperature_K == 0.0) return 0.0;
  const double x = Omega_GHz / (constants::kB_over_h_GHz_per_K * temperature_K);
  return 1.0 / std::expm1(x);
}

std::vector<double> ThermalEnv::weights(int count, double* coverage) const {
  if (count < 1) throw DomainError("count", "must be >= 1");
  std::vector<double> w(count);
  if (temperature == 0.0) {
    w.assign(count, 0.0);
    w[0] = 1.0;
    if (coverage) *coverage = 1.0;
    return w;
  }
  const double x = Omega_zeta / (constants::kB_over_h_GHz_per_K * temperature);
  const double p0 = -std::expm1(-x);  // 1 - e^{-x}
  double sum = 0.0;
  for (int n = 0; n < count; ++n) {
    w[n] = p0 * std::exp(-n * x);
    sum += w[n];
  }
  if (coverage) *coverage = sum;
  for (double& v : w) v /= sum;
  return w;
}

double tphi_1f(double d1, double d2, double A, const NoiseCutoffs& cutoffs) {
  if (!(A > 0.0)) throw DomainError("A", "must be > 0");
  const double wt = cutoffs.omega_ir * cutoffs.t_meas;
  if (!(wt < 1.0)) throw DomainError("cutoffs", "requires omega_ir * t_meas < 1");
  const double log_ir = std::abs(std::log(wt));
  const double log_uv = std::log(cutoffs.omega_uv / cutoffs.omega_ir);
  const double A2 = A * A;
  const double rate2 = 2.0 * A2 * d1 * d1 * log_ir +
                       2.0 * A2 * A2 * d2 * d2 *
                           (log_uv * log_uv + 2.0 * log_ir * log_ir);
  if (rate2 == 0.0) return kInf;
  return 1.0 / std::sqrt(rate2);
}

double tphi_smooth(double S0, double sigma2, double d1, double d2) {
  if (S0 < 0.0) throw DomainError("S0", "must be >= 0");
  const double denom = S0 * (d1 * d1 + d2 * d2 * sigma2 / std::sqrt(2.0));
  if (denom == 0.0) return kInf;
  return 4.0 / denom;
}

ShotNoiseResult shot_noise_rate(double chi01_GHz, double kappa, double n_th) {
  if (!(kappa > 0.0)) throw DomainError("kappa", "must be > 0");
  if (n_th < 0.0) throw DomainError("n_th", "must be >= 0");
  const double chi = constants::GHz_to_rad_per_s * chi01_GHz;
  const std::complex<double> u(1.0, 2.0 * chi / kappa);
  const std::complex<double> arg = u * u + std::complex<double>(0.0, 8.0 * chi * n_th / kappa);
  ShotNoiseResult r;
  r.rate = 0.5 * kappa * (std::sqrt(arg).real() - 1.0);
  if (r.rate < 0.0 && r.rate > -1e-9 * kappa) r.rate = 0.0;  // rounding
  const auto asym = shot_noise_asymptotes(chi01_GHz, kappa, n_th);
  r.regime = std::abs(r.rate - asym.small_chi) <= std::abs(r.rate - asym.large_chi)
                 ? ShotNoiseRegime::small_chi
                 : ShotNoiseRegime::large_chi;
  return r;
}

ShotNoiseAsymptotes shot_noise_asymptotes(double chi01_GHz, double kappa, double n_th) {
  const double chi = constants::GHz_to_rad_per_s * chi01_GHz;
  ShotNoiseAsymptotes a;
  a.small_chi = 4.0 * chi * chi * n_th * (n_th + 1.0) / kappa;
  a.large_chi = kappa * n_th;
  return a;
}

double golden_rule_rate(const HermitianOperator& G, const Eigen::VectorXcd& psi_i,
                        const Eigen::VectorXcd& psi_f, double omega_fi,
                        const NoiseSpectrum& S) {
  if (psi_i.size() != G.dim || psi_f.size() != G.dim)
    throw DomainError("psi", "state dimension does not match operator");
  const std::complex<double> me = psi_f.dot(G.mat * psi_i);
  // S(-omega_fi) realizes S(-|w|) for upward and S(+|w|) for downward moves
  const double c = constants::GHz_to_rad_per_s;
  return c * c * std::norm(me) * S.value(-omega_fi);
}

DepolarizationResult composite_depolarization(const LabeledSpectrum& labels,
                                              const EigenSolution& sol3d,
                                              const HermitianOperator& G3d,
                                              const NoiseSpectrum& S,
                                              const ThermalEnv& env) {
  if (sol3d.eigenvectors.rows() != G3d.dim)
    throw DomainError("G3d", "operator dimension does not match eigenvectors");
  const int nstates = static_cast<int>(labels.states.size());
  DepolarizationResult out;
  const double c2 = constants::GHz_to_rad_per_s * constants::GHz_to_rad_per_s;

  int hybridized_used = 0;
  for (int l0 = 0; l0 <= 1; ++l0) {
    // contiguous run of available initial zeta states for this qubit level
    std::vector<int> init;
    for (int n = 0;; ++n) {
      const int idx = labels.find(l0, n);
      if (idx < 0) break;
      init.push_back(idx);
    }
    if (init.empty()) {
      out.warnings.push_back("no labeled initial states for l=" + std::to_string(l0));
      continue;
    }
    double coverage = 0.0;
    const std::vector<double> w = env.weights(static_cast<int>(init.size()), &coverage);
    if (coverage < 0.99) {
      std::ostringstream msg;
      msg << "thermal coverage for l=" << l0 << " is " << coverage
          << "; zeta truncation too small, weights renormalized";
      out.warnings.push_back(msg.str());
    }
    for (size_t k = 0; k < init.size(); ++k) {
      if (w[k] < 1e-6) break;  // negligible thermal weight
      const int i = init[k];
      if (labels.states[i].hybridized) ++hybridized_used;
      const Eigen::VectorXcd Gpsi = G3d.mat * sol3d.eigenvectors.col(i);
      const double Ei = labels.states[i].energy;
      for (int f = 0; f < nstates; ++f) {
        if (f == i) continue;
        const int lf = labels.states[f].l;
        if (lf == l0) continue;  // zeta-only transition: dephases, not depolarizes
        const bool counts = (l0 == 1 && lf == 0) || lf >= 2;
        if (!counts) continue;
        if (labels.states[f].hybridized) ++hybridized_used;
        const double omega_fi =
            constants::GHz_to_rad_per_s * (labels.states[f].energy - Ei);
        const std::complex<double> me = sol3d.eigenvectors.col(f).dot(Gpsi);
        const double gamma = c2 * std::norm(me) * S.value(-omega_fi);
        const double rate = w[k] * gamma;
        if (l0 == 1 && lf == 0)
          out.Gamma_1to0 += rate;
        else if (l0 == 0)
          out.Gamma_0up += rate;
        else
          out.Gamma_1up += rate;
      }
    }
  }
  if (hybridized_used > 0)
    out.warnings.push_back(std::to_string(hybridized_used) +
                           " hybridized state(s) entered the sums with "
                           "best-guess labels");
  out.Gamma1 = out.Gamma_1to0 + out.Gamma_0up + out.Gamma_1up;
  return out;
}

PurcellResult purcell_exact(const LabeledSpectrum& labels, const EigenSolution& sol3d,
                            const BasisSpec& basis, const Eigen::VectorXd& energies2d,
                            const ThermalEnv& env) {
  const int levels = static_cast<int>(energies2d.size());
  const int nstates = static_cast<int>(labels.states.size());
  PurcellResult out;
  out.Gamma = Eigen::MatrixXd::Zero(levels, levels);

  const SparseCxd a = zeta_annihilation_3d(basis);
  if (sol3d.eigenvectors.rows() != a.rows())
    throw DomainError("sol3d", "dimension does not match basis");

  for (int l0 = 0; l0 < levels; ++l0) {
    std::vector<int> init;
    for (int n = 0;; ++n) {
      const int idx = labels.find(l0, n);
      if (idx < 0) break;
      init.push_back(idx);
    }
    if (init.empty()) continue;
    double coverage = 0.0;
    const std::vector<double> w = env.weights(static_cast<int>(init.size()), &coverage);
    if (coverage < 0.99 && l0 <= 1) {
      std::ostringstream msg;
      msg << "thermal coverage for l=" << l0 << " is " << coverage
          << "; weights renormalized";
      out.warnings.push_back(msg.str());
    }
    for (size_t k = 0; k < init.size(); ++k) {
      if (w[k] < 1e-6) break;
      const int i = init[k];
      const Eigen::VectorXcd apsi = a * sol3d.eigenvectors.col(i);
      const Eigen::VectorXcd adpsi = a.adjoint() * sol3d.eigenvectors.col(i);
      for (int f = 0; f < nstates; ++f) {
        const int lf = labels.states[f].l;
        if (lf == l0 || lf < 0 || lf >= levels) continue;
        const double wq = std::abs(energies2d(lf) - energies2d(l0));
        const double nth = env.n_th_at(wq);
        const bool upward = energies2d(lf) > energies2d(l0);
        const Eigen::VectorXcd& v = upward ? adpsi : apsi;
        const double me2 = std::norm(sol3d.eigenvectors.col(f).dot(v));
        const double pref = upward ? env.kappa_zeta * nth : env.kappa_zeta * (1.0 + nth);
        out.Gamma(l0, lf) += w[k] * pref * me2;
      }
    }
  }
  if (levels >= 2) {
    out.Gamma1 = out.Gamma(1, 0);
    for (int lp = 2; lp < levels; ++lp)
      out.Gamma1 += out.Gamma(0, lp) + out.Gamma(1, lp);
  }
  return out;
}

PurcellResult purcell_perturbative(const Eigen::MatrixXcd& g,
                                   const Eigen::VectorXd& energies2d,
                                   double Omega_zeta, const ThermalEnv& env) {
  const int levels = static_cast<int>(
      std::min<Eigen::Index>(g.rows(), energies2d.size()));
  PurcellResult out;
  out.Gamma = Eigen::MatrixXd::Zero(levels, levels);
  for (int l = 0; l < levels; ++l) {
    for (int lp = 0; lp < levels; ++lp) {
      if (lp == l) continue;
      const double g2 = std::norm(g(l, lp));
      if (g2 == 0.0) continue;
      const double wq = std::abs(energies2d(lp) - energies2d(l));
      const double nth = env.n_th_at(wq);
      const bool upward = energies2d(lp) > energies2d(l);
      const double denom = energies2d(l) - energies2d(lp) + (upward ? Omega_zeta : -Omega_zeta);
      if (std::abs(denom) < 1e-9) {
        std::ostringstream msg;
        msg << "purcell_perturbative: vanishing denominator for pair (" << l
            << "," << lp << ")";
        throw ResonanceError(msg.str());
      }
      const double pref = upward ? env.kappa_zeta * nth : env.kappa_zeta * (1.0 + nth);
      out.Gamma(l, lp) = pref * g2 / (denom * denom);
    }
  }
  if (levels >= 2) {
    out.Gamma1 = out.Gamma(1, 0);
    for (int lp = 2; lp < levels; ++lp)
      out.Gamma1 += out.Gamma(0, lp) + out.Gamma(1, lp);
  }
  return out;
}

double ChannelRates::time() const { return rate > 0.0 ? 1.0 / rate : kInf; }

double RateBreakdown::Tphi() const { return Gamma_phi > 0.0 ? 1.0 / Gamma_phi : kInf; }
double RateBreakdown::T1() const { return Gamma_1 > 0.0 ? 1.0 / Gamma_1 : kInf; }
double RateBreakdown::T2() const {
  const double r = 0.5 * Gamma_1 + Gamma_phi;
  return r > 0.0 ? 1.0 / r : kInf;
}

const ChannelRates* RateBreakdown::find(const std::string& name) const {
  for (const auto& c : channels)
    if (c.name == name) return &c;
  return nullptr;
}

bool RateBreakdown::any_failed() const {
  for (const auto& c : channels)
    if (c.failed) return true;
  return false;
}

RateBreakdown coherence_budget(const CircuitParams& params, const BasisSpec& basis,
                               const BudgetOptions& options) {
  params.validate();
  basis.validate();
  const DerivedEnergies de = derive_energies(params);
  ThermalEnv env;
  env.temperature = params.temperature;
  env.Omega_zeta = de.Omega_zeta;
  env.kappa_zeta = params.kappa_zeta;

  RateBreakdown out;
  auto add = [&](const std::string& name, bool dephasing, bool included,
                 auto&& compute) -> ChannelRates& {
    ChannelRates c;
    c.name = name;
    c.dephasing = dephasing;
    c.included = included;
    try {
      compute(c);
    } catch (const std::exception& e) {
      c.failed = true;
      c.error = e.what();
    }
    out.channels.push_back(std::move(c));
    return out.channels.back();
  };

  // first-order/second-order qubit-frequency susceptibilities
  add("flux_1f_dephasing", true, true, [&](ChannelRates& c) {
    const auto d = energy_derivatives(params, basis, SweepParameter::flux, 0.0,
                                      options.eigen);
    c.rate = 1.0 / tphi_1f(d.d1, d.d2, options.amplitudes.A_flux, options.cutoffs);
  });
  add("Ic_1f_dephasing", true, true, [&](ChannelRates& c) {
    const auto d = energy_derivatives(params, basis, SweepParameter::EJ, 0.0,
                                      options.eigen);
    c.rate = 1.0 / tphi_1f(d.d1, d.d2, options.amplitudes.A_Ic, options.cutoffs);
  });
  add("charge_1f_dephasing", true, options.include_charge, [&](ChannelRates& c) {
    // ng_theta counts Cooper pairs (2e); the 1/f amplitude is quoted in
    // single-electron units, so rescale the derivatives accordingly
    const auto d = energy_derivatives(params, basis, SweepParameter::ng_theta, 0.0,
                                      options.eigen);
    c.rate = 1.0 / tphi_1f(0.5 * d.d1, 0.25 * d.d2, options.amplitudes.A_charge,
                           options.cutoffs);
  });

  // shared 2d spectrum for the dispersive and depolarization channels
  const int k2 = options.levels + 4;
  EigenSolution sol2d;
  bool have2d = false;
  std::string err2d;
  try {
    sol2d = lowest_eigenpairs(build_h_2d(params, basis), k2, options.eigen);
    have2d = true;
  } catch (const std::exception& e) {
    err2d = e.what();
  }

  add("shot_noise", true, true, [&](ChannelRates& c) {
    if (!have2d) throw std::runtime_error("2d eigensolve failed: " + err2d);
    const Eigen::MatrixXcd g = coupling_matrix(sol2d, params, basis, k2);
    const DispersiveReport rep = stark_lamb(g, sol2d.eigenvalues, de.Omega_zeta, k2);
    for (const auto& wmsg : rep.warnings) out.warnings.push_back("shot_noise: " + wmsg);
    c.rate = shot_noise_rate(rep.chi01, env.kappa_zeta, env.n_th()).rate;
  });

  // 3d labeled spectrum shared by the golden-rule and Purcell channels
  EigenSolution sol3d;
  LabeledSpectrum labels;
  bool have3d = false;
  std::string err3d;
  try {
    if (!have2d) throw std::runtime_error("2d eigensolve failed: " + err2d);
    int n_kept = basis.zeta_dim();
    if (env.temperature > 0.0) {
      const double x =
          de.Omega_zeta / (constants::kB_over_h_GHz_per_K * env.temperature);
      n_kept = std::min<int>(
          basis.zeta_dim(),
          static_cast<int>(std::ceil(-std::log1p(-options.zeta_coverage) / x)) + 1);
    } else {
      n_kept = 1;
    }
    int k3 = options.states_3d > 0 ? options.states_3d
                                   : options.levels * n_kept + options.levels;
    k3 = static_cast<int>(std::min<long>(k3, basis.dim3d() - 2));
    sol3d = lowest_eigenpairs(build_h_3d(params, basis), k3, options.eigen);
    labels = label_dressed(sol3d, sol2d, basis);
    have3d = true;
  } catch (const std::exception& e) {
    err3d = e.what();
  }

  auto depolarization = [&](ChannelRates& c, NoiseChannel channel,
                            const NoiseSpectrum& S) {
    if (!have3d) throw std::runtime_error("3d eigensolve failed: " + err3d);
    const HermitianOperator G3d =
        promote_to_3d(build_noise_operator(params, basis, channel), basis);
    const auto dep = composite_depolarization(labels, sol3d, G3d, S, env);
    for (const auto& wmsg : dep.warnings)
      out.warnings.push_back(c.name + ": " + wmsg);
    c.rate = dep.Gamma1;
    c.Gamma_1to0 = dep.Gamma_1to0;
    c.Gamma_0up = dep.Gamma_0up;
    c.Gamma_1up = dep.Gamma_1up;
  };

  add("Ic_1f_depolarization", false, true, [&](ChannelRates& c) {
    depolarization(c, NoiseChannel::critical_current,
                   NoiseSpectrum::one_over_f(options.amplitudes.A_Ic, options.cutoffs));
  });
  add("flux_1f_depolarization", false, true, [&](ChannelRates& c) {
    depolarization(c, NoiseChannel::flux,
                   NoiseSpectrum::one_over_f(options.amplitudes.A_flux, options.cutoffs));
  });
  add("fluxline_ohmic_depolarization", false, true, [&](ChannelRates& c) {
    depolarization(c, NoiseChannel::flux,
                   NoiseSpectrum::ohmic_fluxline(params.fluxline, params.temperature));
  });
  add("purcell", false, true, [&](ChannelRates& c) {
    if (!have3d) throw std::runtime_error("3d eigensolve failed: " + err3d);
    const Eigen::VectorXd eq = sol2d.eigenvalues.head(options.levels);
    const auto pr = purcell_exact(labels, sol3d, basis, eq, env);
    for (const auto& wmsg : pr.warnings) out.warnings.push_back("purcell: " + wmsg);
    c.rate = pr.Gamma1;
    c.Gamma_1to0 = pr.Gamma(1, 0);
    for (int lp = 2; lp < eq.size(); ++lp) {
      c.Gamma_0up += pr.Gamma(0, lp);
      c.Gamma_1up += pr.Gamma(1, lp);
    }
  });

  for (const auto& c : out.channels) {
    if (c.failed || !c.included) continue;
    (c.dephasing ? out.Gamma_phi : out.Gamma_1) += c.rate;
  }
  return out;
}

}  // namespace zeropi
