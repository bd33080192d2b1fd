#ifndef DUGH_PDLINALG_HPP
#define DUGH_PDLINALG_HPP

#include "dugh/common.hpp"

/// Dense symmetric positive-definite matrix utilities underpinning all
/// solvers: eigendecomposition, matrix square roots, the SPD geometric mean,
/// and numerically safe inversion.
///
/// Jitter policy: operations that invert or take square roots shift all
/// eigenvalues by eps * (trace / dim) with eps = 1e-10 whenever the smallest
/// eigenvalue falls below that quantity (equivalent to adding a scaled
/// identity). This keeps iterations alive near the PD boundary without
/// distorting well-conditioned inputs. Every operation returning a nominally
/// symmetric matrix emits (R + R^T) / 2 to remove floating-point drift.
namespace dugh::pdlinalg {

/// Orthonormal eigenvectors and eigenvalues of a symmetric matrix, with
/// eigenvalues sorted in descending order (deterministic reconstruction).
struct EigPair {
  Matrix vectors;  ///< columns are eigenvectors, ordered to match `values`
  Vector values;   ///< descending
};

/// Returns true when `a` is square and symmetric within tolerance `tol` on
/// entry magnitudes.
bool is_symmetric(const Matrix& a, double tol = k_sym_tol);

/// (R + R^T) / 2.
Matrix symmetrized(const Matrix& a);

/// Eigendecomposition of a symmetric matrix. The reconstruction
/// vectors * diag(values) * vectors^T equals the input to machine precision.
/// Throws NonSymmetricError for non-symmetric input. No jitter is applied
/// (the reconstruction must reproduce the input exactly).
EigPair sym_eig(const Matrix& a);

/// Principal square root S of a positive definite matrix: S * S = a.
/// Throws SingularError when an eigenvalue is still <= 0 after jitter.
Matrix pd_sqrt(const Matrix& a);

/// Geometric mean G of two positive definite matrices, computed as
///   a^{1/2} (a^{-1/2} m a^{-1/2})^{1/2} a^{1/2}.
/// G is the unique PD solution of the Riccati equation G a^{-1} G = m, the
/// midpoint of the SPD geodesic between a and m, and is symmetric in its
/// arguments. Throws DimensionError on mismatched shapes and SingularError
/// for operands that are not PD after jitter.
Matrix geometric_mean(const Matrix& a, const Matrix& m);

/// Inverse of a symmetric PD matrix under the jitter policy above.
/// Throws SingularError when the matrix is singular beyond jitter repair.
Matrix safe_inverse(const Matrix& a);

/// log(det(a)) for a symmetric PD matrix, under the same jitter policy.
double logdet_pd(const Matrix& a);

}  // namespace dugh::pdlinalg

#endif  // DUGH_PDLINALG_HPP
