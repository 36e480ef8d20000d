#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace zeropi {

// All stored energies are E/h in GHz. Angular frequencies (rad/s) appear only
// at module boundaries (noise spectra, rates) and are converted explicitly.
namespace constants {
inline constexpr double kB_over_h_GHz_per_K = 20.836619;   // k_B/h
inline constexpr double planck_J_s = 6.62607015e-34;       // h
inline constexpr double two_pi = 6.283185307179586476925286766559;
inline constexpr double GHz_to_rad_per_s = two_pi * 1e9;   // omega = 2*pi*(E/h)
inline constexpr double e_charge_C = 1.602176634e-19;
inline constexpr double flux_quantum_Wb = planck_J_s / (2.0 * e_charge_C);
}  // namespace constants

struct NoiseAmplitudes {
  double A_flux = 1e-6;    // Phi_0 units
  double A_charge = 1e-4;  // e units
  double A_Ic = 1e-7;      // fraction of I_c
};

struct FluxLine {
  double M = 1000.0;  // Phi_0 per ampere
  double R = 50.0;    // ohm
};

struct NoiseCutoffs {
  double omega_ir = constants::two_pi * 1.0;    // rad/s
  double omega_uv = constants::two_pi * 3e9;    // rad/s
  double t_meas = 10e-6;                        // s
};

/// Full physical parameter record for the disordered two-junction qubit
/// circuit: energies, disorder fractions, bias point and environment.
struct CircuitParams {
  double EC = 0.04;    // GHz, zeta/capacitor charging energy
  double ECJ = 20.0;   // GHz, junction charging energy
  double EJ = 10.0;    // GHz, mean Josephson energy
  double EL = 0.04;    // GHz, mean inductive energy

  double dC = 0.0;     // relative deviations, dimensionless
  double dCJ = 0.0;
  double dEJ = 0.0;
  double dEL = 0.0;

  double flux = 0.0;       // Phi_ext / Phi_0
  double ng_theta = 0.0;   // offset charge on theta, 2e-pair units

  double temperature = 0.015;   // K
  double kappa_zeta = 1e4;      // rad/s, intrinsic zeta-mode decay

  NoiseAmplitudes noise_amplitudes;
  FluxLine fluxline;
  NoiseCutoffs cutoffs;

  void validate() const;
};

/// Charging-energy combinations and oscillator scales implied by a parameter
/// set.  ECS = (1/EC + 1/ECJ)^-1, Omega_zeta = sqrt(8 EC EL),
/// omega_p = sqrt(8 ECJ EJ), zeta_osc_length = (8 EC / EL)^(1/4).
struct DerivedEnergies {
  double ECS;              // GHz
  double Omega_zeta;       // GHz (ordinary frequency)
  double omega_p;          // GHz (ordinary frequency)
  double zeta_osc_length;  // dimensionless
};

DerivedEnergies derive_energies(const CircuitParams& params);

/// Discretization choices: theta in the periodic charge basis, phi on a
/// uniform hard-wall grid, zeta in the oscillator Fock basis.
struct BasisSpec {
  int n_theta_max = 10;   // charge states n in [-N, N]
  int phi_points = 0;     // grid count (0 = derive from defaults)
  double phi_max = 0.0;   // grid spans [-phi_max, phi_max]; 0 = derive
  int n_zeta_max = 20;    // Fock cutoff (states 0..n_zeta_max)

  int theta_dim() const { return 2 * n_theta_max + 1; }
  int zeta_dim() const { return n_zeta_max + 1; }
  long dim2d() const { return static_cast<long>(theta_dim()) * phi_points; }
  long dim3d() const { return dim2d() * zeta_dim(); }
  void validate() const;
};

/// Fills in phi grid defaults: phi_max = 7*sigma_phi with
/// sigma_phi = (8 ECJ / EL)^(1/4) / sqrt(2), and a spacing of at most
/// 0.15 rad.  Fields already set by the caller are kept.
BasisSpec default_basis(const CircuitParams& params, BasisSpec spec = {});

struct BareOffsetCharges {
  double nbar_theta = 0.0;
  double nbar_phi = 0.0;
  double nbar_zeta = 0.0;
};

/// Mode-mixed offset charges produced by capacitive disorder, together with
/// the (optionally gate-capacitance renormalized) primed charging energies.
struct EffectiveChargeMap {
  double ECp;        // GHz
  double ECJp;       // GHz
  double ECSp;       // GHz
  double ng_theta_eff;
  double ng_phi_eff;
  double ng_zeta_eff;
};

/// With no gate capacitance given, primed energies equal the bare ones (the
/// renormalization is absorbed into the tabulated parameter values).
EffectiveChargeMap effective_offset_charges(const BareOffsetCharges& bare,
                                            const CircuitParams& params,
                                            std::optional<double> Cg_farad = std::nullopt);

/// Thrown when a physical parameter violates its domain constraint; carries
/// the offending field name.
class DomainError : public std::invalid_argument {
 public:
  DomainError(const std::string& field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace zeropi
