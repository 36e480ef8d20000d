#include "zeropi/params.hpp"

#include <cmath>

namespace zeropi {

void CircuitParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw DomainError(name, "must be positive and finite");
  };
  positive(EC, "EC");
  positive(ECJ, "ECJ");
  positive(EJ, "EJ");
  positive(EL, "EL");

  auto fraction = [](double v, const char* name) {
    if (!(std::abs(v) < 1.0)) throw DomainError(name, "|value| must be < 1");
  };
  fraction(dC, "dC");
  fraction(dCJ, "dCJ");
  fraction(dEJ, "dEJ");
  fraction(dEL, "dEL");

  if (temperature < 0.0) throw DomainError("temperature", "must be >= 0");
  if (!(kappa_zeta > 0.0)) throw DomainError("kappa_zeta", "must be > 0");
  if (!(cutoffs.omega_ir < cutoffs.omega_uv))
    throw DomainError("omega_ir", "must be < omega_uv");
  if (!(cutoffs.t_meas > 0.0)) throw DomainError("t_meas", "must be > 0");
  if (noise_amplitudes.A_flux < 0.0) throw DomainError("A_flux", "must be >= 0");
  if (noise_amplitudes.A_charge < 0.0) throw DomainError("A_charge", "must be >= 0");
  if (noise_amplitudes.A_Ic < 0.0) throw DomainError("A_Ic", "must be >= 0");
  if (!(fluxline.R > 0.0)) throw DomainError("fluxline.R", "must be > 0");
}

DerivedEnergies derive_energies(const CircuitParams& params) {
  params.validate();
  DerivedEnergies d;
  d.ECS = 1.0 / (1.0 / params.EC + 1.0 / params.ECJ);
  d.Omega_zeta = std::sqrt(8.0 * params.EC * params.EL);
  d.omega_p = std::sqrt(8.0 * params.ECJ * params.EJ);
  d.zeta_osc_length = std::pow(8.0 * params.EC / params.EL, 0.25);
  return d;
}

void BasisSpec::validate() const {
  if (n_theta_max < 1) throw DomainError("n_theta_max", "must be >= 1");
  if (phi_points < 3) throw DomainError("phi_points", "must be >= 3");
  if (!(phi_max > 0.0)) throw DomainError("phi_max", "must be > 0");
  if (n_zeta_max < 0) throw DomainError("n_zeta_max", "must be >= 0");
}

BasisSpec default_basis(const CircuitParams& params, BasisSpec spec) {
  params.validate();
  const double sigma_phi = std::pow(8.0 * params.ECJ / params.EL, 0.25) / std::sqrt(2.0);
  if (spec.phi_max <= 0.0) spec.phi_max = 7.0 * sigma_phi;
  if (spec.phi_points <= 0) {
    const double dphi_target = 0.15;
    spec.phi_points = static_cast<int>(std::ceil(2.0 * spec.phi_max / dphi_target)) + 1;
    if (spec.phi_points % 2 == 0) ++spec.phi_points;  // keep phi = 0 on the grid
  }
  return spec;
}

EffectiveChargeMap effective_offset_charges(const BareOffsetCharges& bare,
                                            const CircuitParams& params,
                                            std::optional<double> Cg_farad) {
  params.validate();
  EffectiveChargeMap out;
  double ECp = params.EC, ECJp = params.ECJ;
  double ECS = 1.0 / (1.0 / params.EC + 1.0 / params.ECJ);
  double ECSp = ECS;
  if (Cg_farad) {
    // E_X' = e^2 / 2(C_X + Cg/2), with C_X recovered from E_X = e^2 / 2 C_X.
    const double e2_over_2h = constants::e_charge_C * constants::e_charge_C /
                              (2.0 * constants::planck_J_s * 1e9);  // GHz * farad
    auto renorm = [&](double E_GHz) {
      const double C = e2_over_2h / E_GHz;
      return e2_over_2h / (C + *Cg_farad / 2.0);
    };
    ECp = renorm(params.EC);
    ECJp = renorm(params.ECJ);
    ECSp = renorm(ECS);
  }
  out.ECp = ECp;
  out.ECJp = ECJp;
  out.ECSp = ECSp;
  out.ng_theta_eff = bare.nbar_theta -
                     0.5 * (ECJp / params.ECJ) * params.dCJ * bare.nbar_phi -
                     0.5 * (ECp / params.EC) * params.dC * bare.nbar_zeta;
  out.ng_phi_eff = bare.nbar_phi -
                   0.5 * (ECSp / params.ECJ) * params.dCJ * bare.nbar_theta;
  out.ng_zeta_eff = bare.nbar_zeta -
                    0.5 * (ECSp / params.EC) * params.dC * bare.nbar_theta;
  return out;
}

}  // namespace zeropi
