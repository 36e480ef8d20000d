#include "zeropi/noise.hpp"

#include <cmath>

namespace zeropi {

namespace {

// x + x*coth(x/2) evaluated without overflow; equals 2x/(1-e^{-x}) for x != 0.
// Handles the x -> 0 limit (value 2) and large |x| where exp saturates.
double symmetrized_bose(double x) {
  if (std::abs(x) < 1e-12) return 2.0;
  if (x > 700.0) return 2.0 * x;       // e^{-x} underflows
  if (x < -700.0) return 0.0;          // 1 - e^{-x} overflows; limit is 0
  return 2.0 * x / (1.0 - std::exp(-x));
}

}  // namespace

double NoiseSpectrum::value(double omega) const {
  switch (kind) {
    case SpectrumKind::one_over_f: {
      double w = std::abs(omega);
      if (w > omega_uv) return 0.0;
      if (w < omega_ir) w = omega_ir;
      return constants::two_pi * amplitude * amplitude / std::pow(w, exponent);
    }
    case SpectrumKind::ohmic_fluxline: {
      // S(omega) = M^2 (2 hbar omega / R) [1 + coth(hbar omega / 2 kB T)]
      // in (Phi/Phi_0)^2 s, with M in Phi_0/A.  Using
      // omega [1 + coth(x/2)] = (kB T / hbar) * 2x / (1 - e^{-x}).
      const double hbar = constants::planck_J_s / constants::two_pi;
      const double kT = 1.380649e-23 * temperature;
      const double x = hbar * omega / kT;
      return M * M * (2.0 * kT / R) * symmetrized_bose(x);
    }
    case SpectrumKind::smooth_gaussian: {
      return std::sqrt(constants::two_pi) * t_c * sigma2 *
             std::exp(-0.5 * t_c * t_c * omega * omega);
    }
  }
  return 0.0;
}

NoiseSpectrum NoiseSpectrum::one_over_f(double A, const NoiseCutoffs& cut, double gamma) {
  NoiseSpectrum s;
  s.kind = SpectrumKind::one_over_f;
  s.amplitude = A;
  s.exponent = gamma;
  s.omega_ir = cut.omega_ir;
  s.omega_uv = cut.omega_uv;
  return s;
}

NoiseSpectrum NoiseSpectrum::ohmic_fluxline(const FluxLine& line, double temperature_K) {
  NoiseSpectrum s;
  s.kind = SpectrumKind::ohmic_fluxline;
  s.M = line.M;
  s.R = line.R;
  s.temperature = temperature_K;
  return s;
}

NoiseSpectrum NoiseSpectrum::smooth_gaussian(double t_c, double sigma2) {
  NoiseSpectrum s;
  s.kind = SpectrumKind::smooth_gaussian;
  s.t_c = t_c;
  s.sigma2 = sigma2;
  return s;
}

}  // namespace zeropi
