#ifndef DUGH_TESTS_ORACLES_HPP
#define DUGH_TESTS_ORACLES_HPP

#include <functional>
#include <vector>

#include "dugh/common.hpp"
#include "dugh/rng.hpp"

/// Independent reference implementations used to validate the library.
///
/// Everything here is written from the defining formulas with plain loops and
/// direct Eigen calls - deliberately sharing no code with the library paths
/// under test (no pdlinalg, no solver modules).
namespace oracle {

using dugh::Index;
using dugh::Matrix;
using dugh::Vector;

/// Kronecker product by quadruple loop.
Matrix kron_ref(const Matrix& a, const Matrix& b);

/// vec(X^T): stacks rows of X (time index fastest).
Vector vec_t(const Matrix& x);

/// Inverse of vec_t: reshapes an N*T vector back to an N x T matrix.
Matrix unvec_t(const Vector& v, Index rows, Index cols);

/// Posterior mean of the joint Gaussian in information form:
///   xbar = (Sigma_0^{-1} + D^T Sigma_e^{-1} D)^{-1} D^T Sigma_e^{-1} vec(Y^T)
/// with Sigma_0 = Gamma (x) B, Sigma_e = Lambda (x) B, D = L (x) I_T.
/// Requires strictly positive gamma and lambda. Returns N x T.
Matrix joint_posterior_mean(const Matrix& lead, const Vector& gamma,
                            const Vector& lambda, const Matrix& b,
                            const Matrix& y);

/// Negative log marginal likelihood evaluated on the full M T x M T dense
/// Kronecker covariance (additive constant MT log 2 pi dropped):
///   log|Sigma_y (x) B| + (1/G) sum_g vec(Y_g^T)^T (Sigma_y (x) B)^{-1}
///   vec(Y_g^T).
double nll_smv(const Matrix& lead, const Vector& gamma, const Vector& lambda,
               const Matrix& b, const std::vector<Matrix>& trials);

/// Golden-section minimizer of a unimodal scalar function on [lo, hi].
double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double tol = 1e-12);

/// Numerically minimizes the separable spatial surrogate
/// sum_i (z_i h + g_i / h) coordinatewise over h >= h_min.
Vector spatial_surrogate_min(const Vector& z, const Vector& g, double h_min);

/// Temporal surrogate s(B) = tr(B_k^{-1} B) + tr(M_time B^{-1}) evaluated
/// with plain Eigen inverses.
double temporal_surrogate(const Matrix& b_k, const Matrix& m_time,
                          const Matrix& b);

/// Minimal transport cost over all integer contingency tables with the given
/// margins, in supply units (exhaustive DFS; supply/demand totals must
/// match). The optimum over integer tables equals the LP optimum because the
/// transportation polytope has integral vertices.
double emd_bruteforce(const std::vector<int>& supply,
                      const std::vector<int>& demand, const Matrix& cost);

/// First row of the length-L circulant embedding of the symmetric Toeplitz
/// matrix with the given first row: c_0 = b_0, c_j = c_{L-j} = b_j for
/// j = 1..T-1, free middle positions filled with b_{T-1}.
Vector circulant_embed_row(const Vector& first_row, Index embed_len);

/// Dense L x L circulant matrix with the given first row.
Matrix circulant_dense(const Vector& first_row);

/// Largest root magnitude of z^P - a_1 z^{P-1} - ... - a_P via a companion
/// matrix (coefficients placed in the last column - a layout deliberately
/// different from the library's).
double ar_max_root(const Vector& coeffs);

/// Pearson correlation of two equal-length vectors.
double pearson(const Vector& x, const Vector& y);

/// Random SPD matrix W W^T / dim + 0.5 I.
Matrix random_spd(Index dim, dugh::Rng& rng);

}  // namespace oracle

#endif  // DUGH_TESTS_ORACLES_HPP
