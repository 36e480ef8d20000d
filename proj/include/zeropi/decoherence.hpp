#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "zeropi/circuit.hpp"
#include "zeropi/eigensolver.hpp"
#include "zeropi/noise.hpp"
#include "zeropi/params.hpp"
#include "zeropi/spectrum.hpp"

namespace zeropi {

/// Average thermal photon number 1/(exp(h Omega / kB T) - 1) for a mode
/// frequency Omega given as E/h in GHz.  Returns exactly 0 at T = 0.
double thermal_occupation(double Omega_GHz, double temperature_K);

/// Thermal state of the zeta mode plus its decay rate, shared by the
/// depolarization routines.
struct ThermalEnv {
  double temperature = 0.015;  // K
  double Omega_zeta = 0.0;     // GHz
  double kappa_zeta = 1e4;     // 1/s

  double n_th() const { return thermal_occupation(Omega_zeta, temperature); }
  double n_th_at(double omega_GHz) const {
    return thermal_occupation(omega_GHz, temperature);
  }

  /// Boltzmann weights P(n) for n = 0..count-1, renormalized over the
  /// retained range.  `coverage` (if given) receives the unrenormalized sum,
  /// i.e. the retained fraction of the full thermal distribution.
  std::vector<double> weights(int count, double* coverage = nullptr) const;
};

/// Ramsey dephasing time for 1/f noise with derivatives d1, d2 of the qubit
/// frequency (rad/s per lambda and per lambda^2) and amplitude A in lambda
/// units:
///   T_phi = { 2 A^2 d1^2 |ln w_ir t|
///             + 2 A^4 d2^2 [ln^2(w_uv/w_ir) + 2 ln^2(w_ir t)] }^(-1/2)
/// Returns +infinity when d1 = d2 = 0.
double tphi_1f(double d1, double d2, double A, const NoiseCutoffs& cutoffs = {});

/// Dephasing time for a smooth (short-correlated) spectrum with zero-frequency
/// value S0 (lambda^2 s) and variance sigma2 (lambda^2):
///   T_phi = 4 / { S0 [d1^2 + d2^2 sigma2 / sqrt(2)] }
/// Returns +infinity for a vanishing denominator.
double tphi_smooth(double S0, double sigma2, double d1, double d2);

enum class ShotNoiseRegime { small_chi, large_chi };

struct ShotNoiseResult {
  double rate = 0.0;  // 1/s
  ShotNoiseRegime regime = ShotNoiseRegime::small_chi;
};

/// Shot-noise dephasing from thermal zeta-mode occupation fluctuations:
///   Gamma = (kappa/2) Re[ sqrt((1 + 2i chi/kappa)^2 + 8i chi n_th/kappa) - 1 ]
/// chi01 in GHz, kappa in 1/s.  The regime tags whichever asymptote is closer.
ShotNoiseResult shot_noise_rate(double chi01_GHz, double kappa, double n_th);

struct ShotNoiseAsymptotes {
  double small_chi = 0.0;  // 4 chi^2 n(n+1)/kappa
  double large_chi = 0.0;  // kappa n_th
};

ShotNoiseAsymptotes shot_noise_asymptotes(double chi01_GHz, double kappa, double n_th);

/// Golden-rule transition rate between eigenstates:
///   gamma = (2 pi 1e9)^2 |<f|G|i>|^2 S(-omega_fi)
/// G carries energy/h in GHz per dimensionless lambda; S is in lambda^2 s;
/// omega_fi = (E_f - E_i) in rad/s, so upward transitions sample S at
/// negative frequency and downward ones at positive frequency.
double golden_rule_rate(const HermitianOperator& G, const Eigen::VectorXcd& psi_i,
                        const Eigen::VectorXcd& psi_f, double omega_fi,
                        const NoiseSpectrum& S);

struct DepolarizationResult {
  double Gamma_1to0 = 0.0;  // 1/s
  double Gamma_0up = 0.0;   // excitations 0 -> l' >= 2
  double Gamma_1up = 0.0;   // excitations 1 -> l' >= 2
  double Gamma1 = 0.0;      // sum of the three
  std::vector<std::string> warnings;
};

/// Thermally weighted golden-rule rates between labeled dressed states.
/// Initial zeta states are weighted by renormalized Boltzmann factors;
/// transitions that keep the qubit index l fixed are excluded (they do not
/// depolarize).  Hybridized states contribute with their best-guess labels
/// and are reported in warnings.
DepolarizationResult composite_depolarization(const LabeledSpectrum& labels,
                                              const EigenSolution& sol3d,
                                              const HermitianOperator& G3d,
                                              const NoiseSpectrum& S,
                                              const ThermalEnv& env);

struct PurcellResult {
  Eigen::MatrixXd Gamma;  // Gamma(l, l') = rate l -> l' in 1/s
  double Gamma1 = 0.0;
  std::vector<std::string> warnings;
};

/// Zeta-mode-mediated decay computed from exact dressed states:
/// upward   Gamma_{l->l'} = kappa n_th(w_q) sum_{n,n'} P(n) |<l',n'|a^dag|l,n>|^2
/// downward Gamma_{l->l'} = kappa (1+n_th)  sum_{n,n'} P(n) |<l',n'|a|l,n>|^2
PurcellResult purcell_exact(const LabeledSpectrum& labels, const EigenSolution& sol3d,
                            const BasisSpec& basis, const Eigen::VectorXd& energies2d,
                            const ThermalEnv& env);

/// Leading-order dispersive approximation of the same rates:
/// upward   kappa n_th |g_ll'|^2 / (E_l - E_l' + Omega)^2
/// downward kappa (1+n_th) |g_ll'|^2 / (E_l - E_l' - Omega)^2
/// A vanishing denominator raises ResonanceError naming the pair.
PurcellResult purcell_perturbative(const Eigen::MatrixXcd& g,
                                   const Eigen::VectorXd& energies2d,
                                   double Omega_zeta, const ThermalEnv& env);

struct ChannelRates {
  std::string name;
  bool dephasing = false;  // contributes to 1/T_phi rather than 1/T_1
  bool included = true;    // counted in the combined rates
  double rate = 0.0;       // 1/s; exact 0 means no decay from this channel
  double Gamma_1to0 = 0.0, Gamma_0up = 0.0, Gamma_1up = 0.0;
  bool failed = false;
  std::string error;

  double time() const;  // 1/rate, +infinity at rate 0
};

struct RateBreakdown {
  std::vector<ChannelRates> channels;
  double Gamma_phi = 0.0;  // 1/s, sum over included dephasing channels
  double Gamma_1 = 0.0;
  std::vector<std::string> warnings;

  double Tphi() const;
  double T1() const;
  double T2() const;  // 1/T2 = 1/(2 T1) + 1/Tphi
  const ChannelRates* find(const std::string& name) const;
  bool any_failed() const;
};

struct BudgetOptions {
  NoiseAmplitudes amplitudes;
  NoiseCutoffs cutoffs;
  bool include_charge = false;  // charge dephasing computed but not summed
  int levels = 5;               // qubit levels in depolarization sums
  int states_3d = 0;            // 0: levels * retained zeta count + margin
  double zeta_coverage = 0.999; // thermal weight retained in the zeta sums
  EigenOptions eigen;
};

/// Every dephasing and depolarization channel at one working point, plus the
/// combined T_phi, T_1 and T_2.  A channel that throws is marked failed and
/// excluded from the combined rates.
RateBreakdown coherence_budget(const CircuitParams& params, const BasisSpec& basis,
                               const BudgetOptions& options = {});

}  // namespace zeropi
