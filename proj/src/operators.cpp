#include "zeropi/operators.hpp"

#include <cassert>
#include <stdexcept>

namespace zeropi {

double hermiticity_defect(const SparseCxd& mat) {
  double max_abs = 0.0;
  double max_defect = 0.0;
  SparseCxd adj = SparseCxd(mat.adjoint());
  SparseCxd diff = mat - adj;
  for (int k = 0; k < mat.outerSize(); ++k)
    for (SparseCxd::InnerIterator it(mat, k); it; ++it)
      max_abs = std::max(max_abs, std::abs(it.value()));
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SparseCxd::InnerIterator it(diff, k); it; ++it)
      max_defect = std::max(max_defect, std::abs(it.value()));
  if (max_abs == 0.0) return 0.0;
  return max_defect / max_abs;
}

HermitianOperator HermitianOperator::from_triplets(
    long dim, BasisTag tag,
    const std::vector<Eigen::Triplet<std::complex<double>>>& entries) {
  HermitianOperator op;
  op.dim = dim;
  op.basis_tag = tag;
  op.mat.resize(dim, dim);
  op.mat.setFromTriplets(entries.begin(), entries.end());
  op.mat.makeCompressed();
  if (hermiticity_defect(op.mat) >= kHermiticityTol)
    throw std::logic_error("operator assembly produced a non-Hermitian matrix");
  return op;
}

}  // namespace zeropi
