#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "zeropi/eigensolver.hpp"
#include "zeropi/params.hpp"

namespace zeropi {

/// Qubit--zeta couplings, detunings, ac Stark and Lamb shifts, plus the
/// dispersive-validity diagnostic.  All energies in GHz.
struct DispersiveReport {
  Eigen::MatrixXcd g;        // coupling matrix over primary-level pairs
  Eigen::MatrixXd Delta;     // detunings Delta_ll' = E_l - E_l' - Omega_zeta
  Eigen::VectorXd chi;       // per-level ac Stark shift
  Eigen::VectorXd Lambda;    // per-level Lamb shift
  double chi01 = 0.0;        // (chi[1] - chi[0]) / 2
  double max_g_over_Delta = 0.0;
  std::vector<std::pair<int, int>> excluded_pairs;  // |g/Delta| > 0.5, logged
  std::vector<std::string> warnings;
};

/// g_ll' of the qubit--zeta interaction:
///   g = 1/2 EL dEL (8 EC / EL)^(1/4) <l|phi|l'>
///       + i/2 dC ECS (32 EL / EC)^(1/4) <l|i d/dtheta|l'>
/// with <l|i d/dtheta|l'> = -<l|n_theta|l'> in the charge basis.
Eigen::MatrixXcd coupling_matrix(const EigenSolution& sol2d, const CircuitParams& params,
                                 const BasisSpec& basis, int levels);

/// Second-order dispersive shifts; sums truncated at `levels`.  Pairs with
/// |g/Delta| > 0.5 are excluded from the sums and reported.  A warning is
/// issued when max |g/Delta| among contributing pairs exceeds 0.2.
DispersiveReport stark_lamb(const Eigen::MatrixXcd& g, const Eigen::VectorXd& energies2d,
                            double Omega_zeta, int levels);

class ResonanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace zeropi
