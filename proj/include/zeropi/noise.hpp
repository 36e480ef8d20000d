#pragma once

#include "zeropi/params.hpp"

namespace zeropi {

enum class SpectrumKind { one_over_f, ohmic_fluxline, smooth_gaussian };

/// One-sided-parameterized noise spectral density S(omega) in
/// (dimensionless lambda)^2 * s, evaluable at positive and negative omega.
///
///   one_over_f:     S = 2 pi A^2 / |omega|^gamma on [omega_ir, omega_uv],
///                   |omega| clamped below at omega_ir, zero above omega_uv
///   ohmic_fluxline: S = M^2 (2 hbar omega / R) [1 + coth(hbar omega/2 kB T)]
///                   with M in Phi_0/A so lambda = Phi_ext/Phi_0
///   smooth_gaussian: S = sqrt(2 pi) t_c sigma^2 exp(-t_c^2 omega^2 / 2)
struct NoiseSpectrum {
  SpectrumKind kind = SpectrumKind::one_over_f;
  double amplitude = 0.0;  // A_lambda, channel units (dimensionless here)
  double exponent = 1.0;   // gamma
  double omega_ir = constants::two_pi * 1.0;   // rad/s
  double omega_uv = constants::two_pi * 3e9;   // rad/s
  double M = 0.0;          // Phi_0 per ampere (ohmic)
  double R = 50.0;         // ohm (ohmic)
  double temperature = 0.015;  // K (ohmic)
  double t_c = 0.0;        // s (smooth)
  double sigma2 = 0.0;     // lambda^2 (smooth)

  double value(double omega) const;  // omega in rad/s, may be negative

  static NoiseSpectrum one_over_f(double A, const NoiseCutoffs& cut, double gamma = 1.0);
  static NoiseSpectrum ohmic_fluxline(const FluxLine& line, double temperature_K);
  static NoiseSpectrum smooth_gaussian(double t_c, double sigma2);
};

}  // namespace zeropi
