#include "zeropi/eigensolver.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/SparseLU>

#include "zeropi/params.hpp"

namespace zeropi {

namespace {

Eigen::VectorXcd starting_vector(long dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-0.5, 0.5);
  Eigen::VectorXcd v(dim);
  for (long i = 0; i < dim; ++i) {
    const double re = dist(rng);
    const double im = dist(rng);
    v(i) = std::complex<double>(re, im);
  }
  v.normalize();
  return v;
}

EigenSolution finalize(const SparseCxd& H, const Eigen::VectorXd& vals,
                       Eigen::MatrixXcd vecs, int iterations, double conv_scale,
                       double tol) {
  EigenSolution sol;
  sol.eigenvalues = vals;
  sol.iterations = iterations;
  sol.residuals.resize(vals.size());
  sol.converged.resize(vals.size());
  for (int i = 0; i < vals.size(); ++i) {
    vecs.col(i).normalize();
    sol.residuals(i) = (H * vecs.col(i) - vals(i) * vecs.col(i)).norm();
    sol.converged[i] = sol.residuals(i) < tol * conv_scale;
  }
  sol.eigenvectors = std::move(vecs);
  return sol;
}

EigenSolution dense_lowest(const HermitianOperator& H, int k, double tol) {
  Eigen::MatrixXcd dense(H.mat);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
  const Eigen::VectorXd vals = es.eigenvalues().head(k);
  Eigen::MatrixXcd vecs = es.eigenvectors().leftCols(k);
  const double scale = std::max(std::abs(es.eigenvalues()(0)),
                                std::abs(es.eigenvalues()(H.dim - 1)));
  return finalize(H.mat, vals, std::move(vecs), 1, std::max(scale, 1.0), tol);
}

// Thick-restart Lanczos on the *largest* eigenvalues of OP = (H - sigma)^-1
// with sigma below the spectrum, so the lowest eigenvalues of H converge in a
// handful of restarts regardless of the huge kinetic-energy spectral range.
struct FactorizationFailed {};

EigenSolution shift_invert_lowest(const HermitianOperator& H, int k,
                                  const EigenOptions& options, double sigma,
                                  double range) {
  const long dim = H.dim;
  SparseCxd A = H.mat;
  for (long i = 0; i < dim; ++i) A.coeffRef(i, i) -= sigma;
  A.makeCompressed();
  Eigen::SparseLU<SparseCxd> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw FactorizationFailed{};

  int m = options.max_basis > 0 ? options.max_basis : std::max(2 * k + 40, 80);
  m = static_cast<int>(std::min<long>(m, dim - 1));
  if (m <= k + 2) m = static_cast<int>(std::min<long>(k + 10, dim - 1));

  Eigen::MatrixXcd V(dim, m + 1);
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  V.col(0) = starting_vector(dim, options.seed);

  int nkept = 0;
  int matvecs = 0;
  double beta_last = 0.0;
  Eigen::VectorXd theta;
  Eigen::MatrixXd Y;
  std::mt19937_64 refill_rng(options.seed ^ 0x9e3779b97f4a7c15ULL);

  for (int restart = 0; restart < options.max_restarts; ++restart) {
    for (int j = nkept; j < m; ++j) {
      Eigen::VectorXcd w = lu.solve(V.col(j));
      ++matvecs;
      T(j, j) = std::real(V.col(j).dot(w));
      for (int pass = 0; pass < 2; ++pass) {
        Eigen::VectorXcd coeff = V.leftCols(j + 1).adjoint() * w;
        w.noalias() -= V.leftCols(j + 1) * coeff;
      }
      double beta = w.norm();
      if (beta < 1e-14) {
        std::uniform_real_distribution<double> dist(-0.5, 0.5);
        for (long i = 0; i < dim; ++i)
          w(i) = std::complex<double>(dist(refill_rng), dist(refill_rng));
        for (int pass = 0; pass < 2; ++pass) {
          Eigen::VectorXcd coeff = V.leftCols(j + 1).adjoint() * w;
          w.noalias() -= V.leftCols(j + 1) * coeff;
        }
        beta = w.norm();
        if (j + 1 < m) T(j, j + 1) = T(j + 1, j) = 0.0;
      } else if (j + 1 < m) {
        T(j, j + 1) = T(j + 1, j) = beta;
      }
      beta_last = beta;
      V.col(j + 1) = w / beta;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(T);
    // largest mu correspond to the lowest eigenvalues of H
    theta = small.eigenvalues().reverse();
    Y = small.eigenvectors().rowwise().reverse();

    bool all_converged = true;
    for (int i = 0; i < k; ++i) {
      const double rest = beta_last * std::abs(Y(m - 1, i));
      // |H x - lambda x| <= |A| * r_inv / mu, so demand r_inv <= tol * mu
      if (!(rest <= options.tol * std::abs(theta(i)))) {
        all_converged = false;
        break;
      }
    }
    if (all_converged || restart == options.max_restarts - 1) {
      Eigen::VectorXd lambda(k);
      for (int i = 0; i < k; ++i) lambda(i) = sigma + 1.0 / theta(i);
      Eigen::MatrixXcd X = V.leftCols(m) * Y.leftCols(k);
      // mu is ordered descending, so lambda comes out ascending already
      EigenSolution sol = finalize(H.mat, lambda, std::move(X), matvecs,
                                   std::max(range, 1.0), options.tol);
      if (!all_converged)
        throw EigenSolveError("lowest_eigenpairs: no convergence after " +
                                  std::to_string(options.max_restarts) +
                                  " restarts",
                              std::move(sol));
      return sol;
    }

    const int keep = std::min(std::max(k + 12, (3 * k) / 2), m - 2);
    Eigen::MatrixXcd Vk = V.leftCols(m) * Y.leftCols(keep);
    V.leftCols(keep) = Vk;
    V.col(keep) = V.col(m);
    T.setZero();
    for (int i = 0; i < keep; ++i) {
      T(i, i) = theta(i);
      T(i, keep) = T(keep, i) = beta_last * Y(m - 1, i);
    }
    nkept = keep;
  }
  throw EigenSolveError("lowest_eigenpairs: restart loop exhausted", {});
}

// Crude lower-edge estimate: a short plain Lanczos run gives a Ritz value
// above the true minimum; backing off by a slice of the Gershgorin range
// keeps the shift strictly below the spectrum.
double estimate_shift(const HermitianOperator& H, const EigenOptions& options,
                      double lo, double hi) {
  const long dim = H.dim;
  const int steps = static_cast<int>(std::min<long>(40, dim - 1));
  Eigen::MatrixXcd V(dim, steps + 1);
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(steps, steps);
  V.col(0) = starting_vector(dim, options.seed);
  for (int j = 0; j < steps; ++j) {
    Eigen::VectorXcd w = H.mat * V.col(j);
    T(j, j) = std::real(V.col(j).dot(w));
    for (int pass = 0; pass < 2; ++pass) {
      Eigen::VectorXcd coeff = V.leftCols(j + 1).adjoint() * w;
      w.noalias() -= V.leftCols(j + 1) * coeff;
    }
    const double beta = w.norm();
    if (beta < 1e-14) {
      T.conservativeResize(j + 1, j + 1);
      break;
    }
    if (j + 1 < steps) T(j, j + 1) = T(j + 1, j) = beta;
    V.col(j + 1) = w / beta;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(T);
  const double theta0 = small.eigenvalues()(0);
  const double margin = std::max(0.02 * (hi - lo), 1e-6);
  return std::max(theta0 - margin, lo - margin);
}

}  // namespace

EigenSolution dense_oracle(const HermitianOperator& H, const EigenOptions& options) {
  if (H.dim > options.dense_limit)
    throw ResourceError("dense_oracle: dimension " + std::to_string(H.dim) +
                        " exceeds dense limit " + std::to_string(options.dense_limit));
  return dense_lowest(H, static_cast<int>(H.dim), options.tol);
}

EigenSolution lowest_eigenpairs(const HermitianOperator& H, int k,
                                const EigenOptions& options) {
  const long dim = H.dim;
  if (k < 1 || k >= dim) throw DomainError("k", "need 1 <= k < dim");
  if (!(options.tol > 0.0)) throw DomainError("tol", "must be > 0");

  if (dim <= options.dense_threshold) return dense_lowest(H, k, options.tol);

  // Gershgorin bounds give a safe bracket for the spectrum
  Eigen::VectorXd radius = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd diag(dim);
  for (long col = 0; col < dim; ++col) {
    for (SparseCxd::InnerIterator it(H.mat, col); it; ++it) {
      if (it.row() == col)
        diag(col) = std::real(it.value());
      else
        radius(it.row()) += std::abs(it.value());
    }
  }
  const double lo = (diag - radius).minCoeff();
  const double hi = (diag + radius).maxCoeff();

  // Accelerate the extremal solve with a shift strictly below the spectrum;
  // if the factorization is infeasible, fall back to the plain restarted loop.
  if (dim <= 300000) {
    try {
      const double sigma = estimate_shift(H, options, lo, hi);
      return shift_invert_lowest(H, k, options, sigma, hi - lo);
    } catch (const FactorizationFailed&) {
    }
  }

  int m = options.max_basis > 0 ? options.max_basis : std::max(2 * k + 40, 80);
  m = static_cast<int>(std::min<long>(m, dim - 1));
  if (m <= k + 2) m = static_cast<int>(std::min<long>(k + 10, dim - 1));

  Eigen::MatrixXcd V(dim, m + 1);             // Lanczos/Ritz basis
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);  // projected matrix
  V.col(0) = starting_vector(dim, options.seed);

  int nkept = 0;
  int matvecs = 0;
  double beta_last = 0.0;
  double scale = 1.0;
  Eigen::VectorXd theta;
  Eigen::MatrixXd Y;

  std::mt19937_64 refill_rng(options.seed ^ 0x9e3779b97f4a7c15ULL);

  for (int restart = 0; restart < options.max_restarts; ++restart) {
    for (int j = nkept; j < m; ++j) {
      Eigen::VectorXcd w = H.mat * V.col(j);
      ++matvecs;
      const double alpha = std::real(V.col(j).dot(w));
      T(j, j) = alpha;
      // full reorthogonalization, two passes
      for (int pass = 0; pass < 2; ++pass) {
        Eigen::VectorXcd coeff = V.leftCols(j + 1).adjoint() * w;
        w.noalias() -= V.leftCols(j + 1) * coeff;
      }
      double beta = w.norm();
      if (beta < 1e-14 * std::max(scale, 1.0)) {
        // invariant subspace found; continue with a fresh random direction
        std::uniform_real_distribution<double> dist(-0.5, 0.5);
        for (long i = 0; i < dim; ++i)
          w(i) = std::complex<double>(dist(refill_rng), dist(refill_rng));
        for (int pass = 0; pass < 2; ++pass) {
          Eigen::VectorXcd coeff = V.leftCols(j + 1).adjoint() * w;
          w.noalias() -= V.leftCols(j + 1) * coeff;
        }
        beta = w.norm();
        if (j + 1 < m) T(j, j + 1) = T(j + 1, j) = 0.0;
      } else if (j + 1 < m) {
        T(j, j + 1) = T(j + 1, j) = beta;
      }
      beta_last = beta;
      V.col(j + 1) = w / beta;
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(T);
    theta = small.eigenvalues();
    Y = small.eigenvectors();
    scale = std::max({std::abs(theta(0)), std::abs(theta(m - 1)), 1e-300});

    bool all_converged = true;
    for (int i = 0; i < k; ++i) {
      const double rest = beta_last * std::abs(Y(m - 1, i));
      if (rest > options.tol * scale) {
        all_converged = false;
        break;
      }
    }
    if (all_converged || restart == options.max_restarts - 1) {
      Eigen::MatrixXcd X = V.leftCols(m) * Y.leftCols(k);
      EigenSolution sol = finalize(H.mat, theta.head(k), std::move(X), matvecs,
                                   scale, options.tol);
      if (!all_converged)
        throw EigenSolveError("lowest_eigenpairs: no convergence after " +
                                  std::to_string(options.max_restarts) +
                                  " restarts",
                              std::move(sol));
      return sol;
    }

    // thick restart: keep the lowest Ritz vectors plus the residual direction
    const int keep = std::min(std::max(k + 12, (3 * k) / 2), m - 2);
    Eigen::MatrixXcd Vk = V.leftCols(m) * Y.leftCols(keep);
    V.leftCols(keep) = Vk;
    V.col(keep) = V.col(m);
    T.setZero();
    for (int i = 0; i < keep; ++i) {
      T(i, i) = theta(i);
      T(i, keep) = T(keep, i) = beta_last * Y(m - 1, i);
    }
    nkept = keep;
  }
  throw EigenSolveError("lowest_eigenpairs: restart loop exhausted", {});
}

}  // namespace zeropi
