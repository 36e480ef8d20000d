#include "zeropi/dispersive.hpp"

#include <cmath>
#include <sstream>

namespace zeropi {

Eigen::MatrixXcd coupling_matrix(const EigenSolution& sol2d, const CircuitParams& params,
                                 const BasisSpec& basis, int levels) {
  if (levels > sol2d.eigenvalues.size())
    throw DomainError("levels", "exceeds converged state count");
  const long d2 = basis.dim2d();
  if (sol2d.eigenvectors.rows() != d2)
    throw DomainError("sol2d", "dimension does not match basis");
  const auto de = derive_energies(params);
  const int Np = basis.phi_points;
  const double dphi = 2.0 * basis.phi_max / (Np - 1);

  // diagonal operators on the (theta, phi) grid
  Eigen::VectorXd phi_diag(d2), n_diag(d2);
  for (int it = 0; it < basis.theta_dim(); ++it) {
    const double n = it - basis.n_theta_max;
    for (int ip = 0; ip < Np; ++ip) {
      const long j = static_cast<long>(it) * Np + ip;
      phi_diag(j) = -basis.phi_max + ip * dphi;
      n_diag(j) = n;
    }
  }

  const double cphi = 0.5 * params.EL * params.dEL *
                      std::pow(8.0 * params.EC / params.EL, 0.25);
  const double ctheta = 0.5 * params.dC * de.ECS *
                        std::pow(32.0 * params.EL / params.EC, 0.25);

  const Eigen::VectorXcd phi_c = phi_diag.cast<std::complex<double>>();
  const Eigen::VectorXcd n_c = n_diag.cast<std::complex<double>>();
  Eigen::MatrixXcd g(levels, levels);
  for (int l = 0; l < levels; ++l) {
    const Eigen::VectorXcd vl = sol2d.eigenvectors.col(l);
    for (int lp = 0; lp < levels; ++lp) {
      const Eigen::VectorXcd vlp = sol2d.eigenvectors.col(lp);
      const std::complex<double> me_phi = vl.dot(phi_c.cwiseProduct(vlp));
      // <l| i d/dtheta |l'> = -<l| n_theta |l'>
      const std::complex<double> me_n = vl.dot(n_c.cwiseProduct(vlp));
      g(l, lp) = cphi * me_phi + std::complex<double>(0, 1) * ctheta * (-me_n);
    }
  }
  return g;
}

DispersiveReport stark_lamb(const Eigen::MatrixXcd& g, const Eigen::VectorXd& energies2d,
                            double Omega_zeta, int levels) {
  if (levels > g.rows() || levels > energies2d.size())
    throw DomainError("levels", "exceeds available matrix/energy count");

  DispersiveReport rep;
  rep.g = g.topLeftCorner(levels, levels);
  rep.Delta.resize(levels, levels);
  rep.chi = Eigen::VectorXd::Zero(levels);
  rep.Lambda = Eigen::VectorXd::Zero(levels);

  for (int l = 0; l < levels; ++l)
    for (int lp = 0; lp < levels; ++lp)
      rep.Delta(l, lp) = energies2d(l) - energies2d(lp) - Omega_zeta;

  for (int l = 0; l < levels; ++l) {
    for (int lp = 0; lp < levels; ++lp) {
      const double gabs = std::abs(rep.g(l, lp));
      if (gabs == 0.0) continue;
      const double dlp = rep.Delta(l, lp);
      const double dpl = rep.Delta(lp, l);
      if (std::abs(dlp) < 1e-9 || std::abs(dpl) < 1e-9) {
        std::ostringstream msg;
        msg << "stark_lamb: resonance between levels " << l << " and " << lp
            << " (|Delta| < 1e-9 GHz)";
        throw ResonanceError(msg.str());
      }
      const double ratio = std::max(gabs / std::abs(dlp), gabs / std::abs(dpl));
      if (ratio > 0.5) {
        // perturbation theory invalid for this pair; exclude and log
        if (l <= lp) rep.excluded_pairs.emplace_back(l, lp);
        continue;
      }
      rep.max_g_over_Delta = std::max(rep.max_g_over_Delta, ratio);
      rep.chi(l) += gabs * gabs * (1.0 / dlp - 1.0 / dpl);
      rep.Lambda(l) += gabs * gabs / dlp;
    }
  }
  if (levels >= 2) rep.chi01 = 0.5 * (rep.chi(1) - rep.chi(0));
  if (rep.max_g_over_Delta > 0.2)
    rep.warnings.push_back("dispersive validity marginal: max |g/Delta| = " +
                           std::to_string(rep.max_g_over_Delta));
  for (auto& [l, lp] : rep.excluded_pairs)
    rep.warnings.push_back("near-resonant pair (" + std::to_string(l) + "," +
                           std::to_string(lp) + ") excluded from chi sums");
  return rep;
}

}  // namespace zeropi
