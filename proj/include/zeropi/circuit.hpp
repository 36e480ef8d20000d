#pragma once

#include "zeropi/operators.hpp"
#include "zeropi/params.hpp"

namespace zeropi {

enum class NoiseChannel { critical_current, flux };

/// Hamiltonian of the primary (theta, phi) degrees of freedom in GHz,
/// including junction-disorder terms.  Basis ordering: index = i_theta *
/// phi_points + i_phi with theta charge quantum number n = i_theta -
/// n_theta_max and phi_i = -phi_max + i * dphi.
///
/// Term map (energies E/h in GHz):
///   2*ECS*(n_theta - ng_theta)^2                       theta kinetic
///   -2*ECJ * d^2/dphi^2            (central 2nd diff)  phi kinetic
///   -2*EJ cos(theta) cos(phi - pi*flux)                Josephson
///   +EL phi^2                                          inductive
///   +2*ECS*dCJ d/dphi d/dtheta     (d/dtheta -> i n)   capacitive disorder
///   +EJ*dEJ sin(theta) sin(phi - pi*flux)              junction disorder
HermitianOperator build_h_2d(const CircuitParams& params, const BasisSpec& basis);

/// Full Hamiltonian including the harmonic zeta mode, zeta-blocked:
/// index = (i_zeta * theta_dim + i_theta) * phi_points + i_phi.
/// H = H_2d (x) 1 + Omega_zeta * n_zeta + H_int, with
///   H_int = 2*ECS*dC d/dtheta d/dzeta + EL*dEL phi zeta,
/// where zeta = (l/2)(a + a^dag) and d/dzeta = (1/l)(a - a^dag) for
/// l = (8 EC / EL)^(1/4), the representation that diagonalizes the zeta
/// oscillator at frequency sqrt(8 EC EL).
HermitianOperator build_h_3d(const CircuitParams& params, const BasisSpec& basis);

/// Coupling operator of the requested noise channel on the (theta, phi)
/// basis, in GHz per unit of the dimensionless noise variable:
///   critical_current: lambda = delta I_c / I_c,
///     G = -2*EJ cos(theta) cos(phi - pi*flux) + EJ*dEJ sin(theta) sin(...)
///   flux: lambda = delta Phi_ext / Phi_0,
///     G = -2*pi*EJ cos(theta) sin(phi - pi*flux)
///         - pi*EJ*dEJ sin(theta) cos(phi - pi*flux)
/// Multiply matrix elements by 2*pi*1e9 to obtain rad/s per unit lambda.
HermitianOperator build_noise_operator(const CircuitParams& params,
                                       const BasisSpec& basis,
                                       NoiseChannel channel);

/// Promotes a (theta, phi) operator to the 3d basis acting trivially on zeta.
HermitianOperator promote_to_3d(const HermitianOperator& op2d, const BasisSpec& basis);

/// Annihilation operator of the zeta mode on the 3d basis (not Hermitian;
/// returned as a plain sparse matrix).
SparseCxd zeta_annihilation_3d(const BasisSpec& basis);

/// Dimension cap honoring ZEROPI_MAX_DIM; throws ResourceError beyond it.
long max_operator_dim();

}  // namespace zeropi
