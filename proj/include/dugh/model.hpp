#ifndef DUGH_MODEL_HPP
#define DUGH_MODEL_HPP

#include <variant>
#include <vector>

#include "dugh/common.hpp"

/// Core data types of the generative model
///
///   Y_g = L X_g + E_g,  g = 1..G,
///   vec(X_g^T) ~ N(0, Gamma (x) B),  vec(E_g^T) ~ N(0, Lambda (x) B),
///
/// where (x) is the Kronecker product, Gamma = diag(gamma) holds source
/// variances, Lambda = diag(lambda) noise variances, and B is the shared
/// temporal covariance. The module also provides the Type-II negative log
/// marginal likelihood and naive dense posterior formulas used as exactness
/// oracles for the efficient solver paths.
namespace dugh {

/// Forward matrix L (M sensors x N sources).
struct LeadField {
  Index m_sensors = 0;
  Index n_sources = 0;
  Matrix entries;  ///< M x N

  /// Validates the entries (finite), optionally normalizing each column to
  /// unit Euclidean norm.
  static LeadField from_matrix(Matrix entries, bool normalize_columns = false);
};

/// Augmented design Phi = [L | I_M]; the identity block carries the noise
/// variances so that Sigma_y = Phi diag(h) Phi^T.
struct AugmentedDesign {
  Matrix phi;  ///< M x (N + M)

  static AugmentedDesign from_lead(const LeadField& lead);
};

/// G measurement blocks, each M x T.
struct TrialSet {
  Index g_trials = 0;
  Index t_samples = 0;
  std::vector<Matrix> blocks;

  /// Validates that all blocks share the same shape and are finite.
  static TrialSet from_blocks(std::vector<Matrix> blocks);
};

/// Concatenated nonnegative variance vector h = [gamma_1..gamma_N,
/// lambda_1..lambda_M]. Every entry is floored at k_h_min; when the
/// homoscedastic flag is set the M noise entries are identical.
struct SpatialParams {
  Vector h;
  Index n_sources = 0;
  Index m_sensors = 0;
  bool homoscedastic = false;

  static SpatialParams from_vector(Vector h, Index n_sources, Index m_sensors,
                                   bool homoscedastic = false);

  Eigen::VectorBlock<const Vector> gamma() const { return h.head(n_sources); }
  Eigen::VectorBlock<const Vector> lambda() const { return h.tail(m_sensors); }
};

/// Dense symmetric PD temporal covariance.
struct FullTemporal {
  Matrix b;  ///< T x T
};

/// Toeplitz temporal covariance represented by the positive spectrum p of its
/// circulant embedding of length embed_len >= 2T - 1.
struct SpectrumTemporal {
  Vector p;
  Index t_samples = 0;
  Index embed_len = 0;
};

/// Either representation of the temporal model.
using TemporalModel = std::variant<FullTemporal, SpectrumTemporal>;

/// Validates a temporal model (symmetry/PD for the dense variant; spectrum
/// floor and embedding length for the spectral variant). Throws
/// ValidationError on violation.
void validate_temporal(const TemporalModel& temporal);

/// Materializes the temporal model as a dense T x T matrix.
Matrix dense_b(const TemporalModel& temporal);

/// Output of a solver run.
struct FitResult {
  std::vector<Matrix> posterior_means;  ///< G matrices, each N x T
  SpatialParams spatial;
  TemporalModel temporal;
  std::vector<double> nll_trace;  ///< one entry per iteration, non-increasing
  bool converged = false;
  int iterations = 0;
  /// Spectrum eigenvalues clipped to the floor across the run (thin solver
  /// diagnostics; zero for the other solvers).
  Index spectrum_clips = 0;
};

/// Model covariance in sensor space: Sigma_y = L Gamma L^T + Lambda, equal to
/// Phi diag(h) Phi^T by construction.
Matrix sigma_y(const SpatialParams& spatial, const LeadField& lead);

/// Type-II negative log marginal likelihood (additive constant M T log(2 pi)
/// dropped):
///
///   T log|Sigma_y| + M log|B| + (1/G) sum_g tr(Sigma_y^{-1} Y_g B^{-1} Y_g^T).
///
/// Matches the vectorized single-measurement form
/// log|Sigma_y (x) B| + (1/G) sum_g y_g^T (Sigma_y (x) B)^{-1} y_g exactly.
double nll_kron(const SpatialParams& spatial, const TemporalModel& temporal,
                const TrialSet& trials, const LeadField& lead);

/// Naive dense posterior mean per trial (oracle scale only):
///   xbar_g = Sigma_0 D^T (Sigma_y (x) B)^{-1} vec(Y_g^T),
/// with Sigma_0 = Gamma (x) B and D = L (x) I_T, reshaped to N x T.
std::vector<Matrix> naive_posterior_mean(const SpatialParams& spatial,
                                         const TemporalModel& temporal,
                                         const LeadField& lead,
                                         const TrialSet& trials);

/// Naive dense posterior covariance (oracle scale only):
///   Sigma_x = Sigma_0 - Sigma_0 D^T (Sigma_y (x) B)^{-1} D Sigma_0,
/// an NT x NT matrix in the vec(X^T) ordering (time index fastest).
Matrix naive_posterior_cov(const SpatialParams& spatial,
                           const TemporalModel& temporal,
                           const LeadField& lead);

/// Kronecker product helper shared by the naive formulas (row-major pairing:
/// out((i-1)p+k, (j-1)q+l) = a(i,j) * b(k,l)).
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace dugh

#endif  // DUGH_MODEL_HPP
