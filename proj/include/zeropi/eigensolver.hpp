#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "zeropi/operators.hpp"

namespace zeropi {

/// Ordered low-energy eigenpairs of a Hermitian operator, in GHz.
struct EigenSolution {
  Eigen::VectorXd eigenvalues;   // ascending
  Eigen::MatrixXcd eigenvectors; // unit-norm columns
  Eigen::VectorXd residuals;     // ||H v - lambda v||_2
  int iterations = 0;
  std::vector<bool> converged;
};

struct EigenOptions {
  double tol = 1e-10;        // residual tolerance relative to ||H|| estimate
  int max_basis = 0;         // Krylov basis size; 0 = max(2k + 40, 80)
  int max_restarts = 600;
  std::uint64_t seed = 20200405ULL;  // starting-vector seed
  long dense_limit = 4000;   // dense_oracle dimension cap
  int dense_threshold = 600; // below this, lowest_eigenpairs goes dense
};

/// Non-convergence within the iteration budget; carries the partial solution.
class EigenSolveError : public std::runtime_error {
 public:
  EigenSolveError(const std::string& what, EigenSolution partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const EigenSolution& partial() const { return partial_; }

 private:
  EigenSolution partial_;
};

/// k lowest eigenpairs via thick-restart Lanczos with full
/// reorthogonalization; deterministic for a fixed seed.  Falls back to dense
/// diagonalization below options.dense_threshold.
EigenSolution lowest_eigenpairs(const HermitianOperator& H, int k,
                                const EigenOptions& options = {});

/// Full spectrum by dense Hermitian diagonalization; validation only.
EigenSolution dense_oracle(const HermitianOperator& H,
                           const EigenOptions& options = {});

}  // namespace zeropi
