#ifndef DUGH_SOLVER_THIN_HPP
#define DUGH_SOLVER_THIN_HPP

#include "dugh/model.hpp"
#include "dugh/solver_common.hpp"

/// Thin solver: the temporal covariance is constrained to symmetric Toeplitz
/// form and learned through the positive spectrum of its circulant embedding,
/// giving closed-form temporal updates and an efficient exact posterior mean
/// that never forms NT x NT matrices.
namespace dugh {

/// Selector-times-DFT operator Q = [I_T, 0] F_L, where F_L is the unitary
/// DFT matrix [F_L]_{m,l} = (1/sqrt(L)) exp(i 2 pi (l-1)(m-1) / L). Together
/// with an eigenvalue vector p it reconstructs B = Q diag(p) Q^H, the leading
/// T x T block of the circulant with spectrum p.
struct CirculantBasis {
  Index t_samples = 0;
  Index embed_len = 0;
  CMatrix q;  ///< T x L

  /// Builds the operator. Requires 1 <= T <= L.
  static CirculantBasis make(Index t_samples, Index embed_len);
};

/// Per-(frequency, eigendirection) posterior weights for the efficient
/// posterior mean, in whitened coordinates where every sensor has unit noise
/// variance: values(l, m) = 1 / (p_l * (sigma2 + d_m)) with d the eigenvalues
/// of the whitened source-space sensor covariance. All entries are strictly
/// positive and finite.
struct PiWeights {
  Matrix values;  ///< L x M

  static PiWeights make(const Vector& p, const Vector& d, double sigma2);
};

/// Spectrum of the circulant embedding of the symmetric Toeplitz matrix with
/// the given first row: the embedding's first row extends first_row
/// symmetrically (free positions filled with the last coefficient), and the
/// returned vector holds its unnormalized DFT - the circulant's eigenvalues.
/// Entries below p_min are clipped to p_min and counted in *clip_count (when
/// given); clipping more than 10% of the entries emits a warning on stderr.
/// Requires embed_len >= 2T - 1.
Vector toeplitz_spectrum(const Vector& first_row, Index embed_len,
                         Index* clip_count = nullptr);

/// Rebuilds the T x T temporal covariance B = Re(Q diag(p) Q^H), symmetrized.
/// Toeplitz by construction.
Matrix build_b_from_spectrum(const Vector& p, const CirculantBasis& basis);

/// Closed-form spectrum update p_l = max(sqrt(g_l / z_l), p_min) with
/// g_l = p_l^2 [Q^H B^{-1} M_time B^{-1} Q]_{ll} and z_l = [Q^H B^{-1} Q]_{ll}
/// evaluated at the current iterate; minimizes the Toeplitz-constrained
/// temporal surrogate. Entries hitting the floor are counted in *clip_count
/// when given. Requires b_k consistent with p_k (b_k =
/// build_b_from_spectrum(p_k, basis)).
Vector update_spectrum(const Vector& p_k, const Matrix& b_k,
                       const Matrix& m_time, const CirculantBasis& basis,
                       Index* clip_count = nullptr);

/// Exact posterior mean of one trial under the spectral temporal model,
/// computed in O(M^3 + LT(M + N)) per trial instead of dense NT x NT algebra.
/// Heteroscedastic noise is handled by pre-whitening the lead field and data
/// with Lambda^{-1/2}; the source-space result needs no unwhitening. Matches
/// naive_posterior_mean on the dense Kronecker construction.
Matrix efficient_posterior_mean(const SpatialParams& spatial, const Vector& p,
                                const CirculantBasis& basis,
                                const LeadField& lead, const Matrix& trial);

/// Runs the thin solver to convergence. Requires T >= 2 and G >= 1; the
/// embedding length defaults to 2T + 1.
FitResult fit_thin(const LeadField& lead, const TrialSet& trials,
                   const FitConfig& config);

}  // namespace dugh

#endif  // DUGH_SOLVER_THIN_HPP
