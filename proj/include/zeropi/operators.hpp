#pragma once

#include <complex>
#include <vector>

#include <Eigen/SparseCore>

namespace zeropi {

enum class BasisTag { theta_phi, theta_phi_zeta, zeta_only };

using SparseCxd = Eigen::SparseMatrix<std::complex<double>>;

/// Sparse complex Hermitian matrix plus dimension/basis metadata.  Immutable
/// after construction; assembly goes through from_triplets which enforces the
/// Hermiticity invariant.
struct HermitianOperator {
  long dim = 0;
  BasisTag basis_tag = BasisTag::theta_phi;
  SparseCxd mat;

  static HermitianOperator from_triplets(
      long dim, BasisTag tag,
      const std::vector<Eigen::Triplet<std::complex<double>>>& entries);
};

/// max |H - H^dag| entrywise, relative to max |H|.  Zero matrices pass.
double hermiticity_defect(const SparseCxd& mat);

inline constexpr double kHermiticityTol = 1e-12;

}  // namespace zeropi
