#include "dugh/pdlinalg.hpp"

#include <Eigen/Eigenvalues>

#include <string>

namespace dugh::pdlinalg {

namespace {

/// Eigendecomposition sorted descending, without symmetry validation.
EigPair eig_descending(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrized(a));
  if (solver.info() != Eigen::Success)
    throw SingularError("eigendecomposition failed to converge");
  const Index n = a.rows();
  EigPair out;
  out.vectors.resize(n, n);
  out.values.resize(n);
  // Eigen returns ascending order; reverse to descending.
  for (Index i = 0; i < n; ++i) {
    out.values(i) = solver.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return out;
}

/// Applies the jitter policy to the eigenvalues of `a`: shift everything by
/// eps * (trace / dim) when the smallest eigenvalue falls below that value.
EigPair jittered_eig(const Matrix& a) {
  EigPair eig = eig_descending(a);
  const Index n = a.rows();
  const double scale = a.trace() / static_cast<double>(n);
  const double jitter = k_jitter_eps * scale;
  if (eig.values(n - 1) < jitter) eig.values.array() += jitter;
  return eig;
}

void require_symmetric(const Matrix& a, const char* op) {
  if (!is_symmetric(a))
    throw NonSymmetricError(std::string(op) + ": input matrix is not symmetric");
}

void require_positive(const Vector& eigvals, const char* op) {
  if (eigvals(eigvals.size() - 1) <= 0.0)
    throw SingularError(std::string(op) +
                        ": matrix has a non-positive eigenvalue after jitter");
}

}  // namespace

bool is_symmetric(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= tol;
}

Matrix symmetrized(const Matrix& a) { return 0.5 * (a + a.transpose()); }

EigPair sym_eig(const Matrix& a) {
  require_symmetric(a, "sym_eig");
  return eig_descending(a);
}

Matrix pd_sqrt(const Matrix& a) {
  require_symmetric(a, "pd_sqrt");
  EigPair eig = jittered_eig(a);
  require_positive(eig.values, "pd_sqrt");
  return symmetrized(eig.vectors * eig.values.cwiseSqrt().asDiagonal() *
                     eig.vectors.transpose());
}

Matrix geometric_mean(const Matrix& a, const Matrix& m) {
  if (a.rows() != m.rows() || a.cols() != m.cols())
    throw DimensionError("geometric_mean: operand dimensions differ");
  const Matrix root = pd_sqrt(a);
  const Matrix root_inv = safe_inverse(root);
  const Matrix inner = pd_sqrt(symmetrized(root_inv * m * root_inv));
  return symmetrized(root * inner * root);
}

Matrix safe_inverse(const Matrix& a) {
  require_symmetric(a, "safe_inverse");
  EigPair eig = jittered_eig(a);
  require_positive(eig.values, "safe_inverse");
  return symmetrized(eig.vectors * eig.values.cwiseInverse().asDiagonal() *
                     eig.vectors.transpose());
}

double logdet_pd(const Matrix& a) {
  require_symmetric(a, "logdet_pd");
  EigPair eig = jittered_eig(a);
  require_positive(eig.values, "logdet_pd");
  return eig.values.array().log().sum();
}

}  // namespace dugh::pdlinalg
