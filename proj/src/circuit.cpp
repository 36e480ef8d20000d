#include "zeropi/circuit.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace zeropi {

namespace {

using Triplet = Eigen::Triplet<std::complex<double>>;
using Cx = std::complex<double>;

struct Grid2d {
  int Nt, Np;
  double phi0, dphi;
  int n_theta_max;
  long idx(int it, int ip) const { return static_cast<long>(it) * Np + ip; }
  double phi(int ip) const { return phi0 + ip * dphi; }
  int charge(int it) const { return it - n_theta_max; }
};

Grid2d make_grid(const BasisSpec& basis) {
  Grid2d g;
  g.Nt = basis.theta_dim();
  g.Np = basis.phi_points;
  g.n_theta_max = basis.n_theta_max;
  g.phi0 = -basis.phi_max;
  g.dphi = 2.0 * basis.phi_max / (basis.phi_points - 1);
  return g;
}

void check_dim(long dim) {
  if (dim > max_operator_dim())
    throw ResourceError("operator dimension " + std::to_string(dim) +
                        " exceeds limit " + std::to_string(max_operator_dim()) +
                        " (set ZEROPI_MAX_DIM to raise)");
}

}  // namespace

long max_operator_dim() {
  static const long cap = [] {
    if (const char* env = std::getenv("ZEROPI_MAX_DIM")) {
      long v = std::atol(env);
      if (v > 0) return v;
    }
    return 4000000L;
  }();
  return cap;
}

HermitianOperator build_h_2d(const CircuitParams& params, const BasisSpec& basis) {
  params.validate();
  basis.validate();
  check_dim(basis.dim2d());
  const auto de = derive_energies(params);
  const Grid2d g = make_grid(basis);
  const double half_ext = 0.5 * constants::two_pi * params.flux;  // varphi_ext / 2
  const double inv_dphi2 = 1.0 / (g.dphi * g.dphi);

  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(basis.dim2d()) * 8);

  for (int it = 0; it < g.Nt; ++it) {
    const double n = g.charge(it);
    for (int ip = 0; ip < g.Np; ++ip) {
      const long row = g.idx(it, ip);
      const double phi = g.phi(ip);

      // diagonal: theta kinetic (linear offset-charge term absorbed),
      // phi kinetic diagonal of the second difference, inductive potential
      double diag = 2.0 * de.ECS * (n - params.ng_theta) * (n - params.ng_theta) +
                    4.0 * params.ECJ * inv_dphi2 + params.EL * phi * phi;
      trip.emplace_back(row, row, Cx(diag, 0.0));

      // -2 ECJ d^2/dphi^2, hard wall beyond the grid
      if (ip + 1 < g.Np) {
        trip.emplace_back(row, g.idx(it, ip + 1), Cx(-2.0 * params.ECJ * inv_dphi2, 0.0));
        trip.emplace_back(g.idx(it, ip + 1), row, Cx(-2.0 * params.ECJ * inv_dphi2, 0.0));
      }

      // Josephson terms: cos(theta) = (|n+1><n| + h.c.)/2,
      // sin(theta) -> <n+1|sin|n> = -i/2, <n|sin|n+1> = +i/2
      if (it + 1 < g.Nt) {
        const long up = g.idx(it + 1, ip);
        const double cosfac = -params.EJ * std::cos(phi - half_ext);
        const double sinfac = 0.5 * params.EJ * params.dEJ * std::sin(phi - half_ext);
        trip.emplace_back(up, row, Cx(cosfac, -sinfac));
        trip.emplace_back(row, up, Cx(cosfac, sinfac));
      }

      // 2 ECS dCJ d/dphi d/dtheta with d/dtheta -> i*n and central 1st diff
      if (params.dCJ != 0.0) {
        const double c = 2.0 * de.ECS * params.dCJ * n / (2.0 * g.dphi);
        if (ip + 1 < g.Np) trip.emplace_back(row, g.idx(it, ip + 1), Cx(0.0, c));
        if (ip - 1 >= 0) trip.emplace_back(row, g.idx(it, ip - 1), Cx(0.0, -c));
      }
    }
  }
  return HermitianOperator::from_triplets(basis.dim2d(), BasisTag::theta_phi, trip);
}

HermitianOperator build_h_3d(const CircuitParams& params, const BasisSpec& basis) {
  params.validate();
  basis.validate();
  check_dim(basis.dim3d());
  const auto de = derive_energies(params);
  const Grid2d g = make_grid(basis);
  const long d2 = basis.dim2d();
  const int Nz = basis.zeta_dim();

  // Zero-point length: zeta = x_zpf (a + a^dag) with x_zpf = l/2 and
  // l = (8 EC / EL)^(1/4); this choice diagonalizes the zeta oscillator.
  const double x_zpf = 0.5 * de.zeta_osc_length;

  const HermitianOperator h2 = build_h_2d(params, basis);

  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(h2.mat.nonZeros()) * Nz + basis.dim3d() * 4);

  for (int nz = 0; nz < Nz; ++nz) {
    const long off = static_cast<long>(nz) * d2;
    for (int k = 0; k < h2.mat.outerSize(); ++k)
      for (SparseCxd::InnerIterator it(h2.mat, k); it; ++it)
        trip.emplace_back(off + it.row(), off + it.col(), it.value());
    for (long j = 0; j < d2; ++j)
      trip.emplace_back(off + j, off + j, Cx(de.Omega_zeta * nz, 0.0));
  }

  // H_int, coupling zeta blocks n-1 <-> n via (a + a^dag) and (a - a^dag)
  if (params.dC != 0.0 || params.dEL != 0.0) {
    for (int nz = 1; nz < Nz; ++nz) {
      const double sq = std::sqrt(static_cast<double>(nz));
      const long lo = static_cast<long>(nz - 1) * d2;
      const long hi = static_cast<long>(nz) * d2;
      for (int it = 0; it < g.Nt; ++it) {
        const double n = g.charge(it);
        for (int ip = 0; ip < g.Np; ++ip) {
          const long j = g.idx(it, ip);
          // EL dEL phi zeta: symmetric in the block pair
          const double vphi = params.EL * params.dEL * x_zpf * g.phi(ip) * sq;
          // 2 ECS dC d/dtheta d/dzeta = i n (ECS dC / x_zpf) (a - a^dag)
          const double vth = de.ECS * params.dC * n / x_zpf * sq;
          // <n-1| a |n> = sq: (a - a^dag)[lo,hi] = +sq, [hi,lo] = -sq
          trip.emplace_back(lo + j, hi + j, Cx(vphi, vth));
          trip.emplace_back(hi + j, lo + j, Cx(vphi, -vth));
        }
      }
    }
  }
  return HermitianOperator::from_triplets(basis.dim3d(), BasisTag::theta_phi_zeta, trip);
}

HermitianOperator build_noise_operator(const CircuitParams& params,
                                       const BasisSpec& basis,
                                       NoiseChannel channel) {
  params.validate();
  basis.validate();
  check_dim(basis.dim2d());
  const Grid2d g = make_grid(basis);
  const double half_ext = 0.5 * constants::two_pi * params.flux;
  const double pi = constants::two_pi / 2.0;

  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(basis.dim2d()) * 2);
  for (int it = 0; it + 1 < g.Nt; ++it) {
    for (int ip = 0; ip < g.Np; ++ip) {
      const long row = g.idx(it, ip);
      const long up = g.idx(it + 1, ip);
      const double phi = g.phi(ip);
      double cos_coef, sin_coef;  // coefficients of cos(theta)*f, sin(theta)*h
      switch (channel) {
        case NoiseChannel::critical_current:
          // lambda = delta I_c / I_c (Phi_0 I_c / pi = 2 EJ)
          cos_coef = -2.0 * params.EJ * std::cos(phi - half_ext);
          sin_coef = params.EJ * params.dEJ * std::sin(phi - half_ext);
          break;
        case NoiseChannel::flux:
          // lambda = delta Phi_ext / Phi_0
          cos_coef = -2.0 * pi * params.EJ * std::sin(phi - half_ext);
          sin_coef = -pi * params.EJ * params.dEJ * std::cos(phi - half_ext);
          break;
        default:
          throw DomainError("channel", "unknown noise channel");
      }
      // cos(theta): 1/2 on n -> n+1; sin(theta): -i/2 on n -> n+1
      trip.emplace_back(up, row, Cx(0.5 * cos_coef, -0.5 * sin_coef));
      trip.emplace_back(row, up, Cx(0.5 * cos_coef, 0.5 * sin_coef));
    }
  }
  return HermitianOperator::from_triplets(basis.dim2d(), BasisTag::theta_phi, trip);
}

HermitianOperator promote_to_3d(const HermitianOperator& op2d, const BasisSpec& basis) {
  const long d2 = basis.dim2d();
  if (op2d.dim != d2)
    throw DomainError("op2d", "dimension does not match basis");
  check_dim(basis.dim3d());
  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(op2d.mat.nonZeros()) * basis.zeta_dim());
  for (int nz = 0; nz < basis.zeta_dim(); ++nz) {
    const long off = static_cast<long>(nz) * d2;
    for (int k = 0; k < op2d.mat.outerSize(); ++k)
      for (SparseCxd::InnerIterator it(op2d.mat, k); it; ++it)
        trip.emplace_back(off + it.row(), off + it.col(), it.value());
  }
  return HermitianOperator::from_triplets(basis.dim3d(), BasisTag::theta_phi_zeta, trip);
}

SparseCxd zeta_annihilation_3d(const BasisSpec& basis) {
  const long d2 = basis.dim2d();
  std::vector<Triplet> trip;
  for (int nz = 1; nz < basis.zeta_dim(); ++nz) {
    const double sq = std::sqrt(static_cast<double>(nz));
    for (long j = 0; j < d2; ++j)
      trip.emplace_back(static_cast<long>(nz - 1) * d2 + j,
                        static_cast<long>(nz) * d2 + j, Cx(sq, 0.0));
  }
  SparseCxd a(basis.dim3d(), basis.dim3d());
  a.setFromTriplets(trip.begin(), trip.end());
  return a;
}

}  // namespace zeropi
