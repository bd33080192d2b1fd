#ifndef DUGH_SOLVER_FULL_HPP
#define DUGH_SOLVER_FULL_HPP

#include "dugh/model.hpp"
#include "dugh/solver_common.hpp"

/// Full solver: alternating majorization-minimization updates for the dense
/// temporal covariance B (matrix-geometric-mean step) and the diagonal
/// spatial variances h (closed-form square-root step), iterated until the
/// posterior means stop changing. Every iteration is guaranteed not to
/// increase the negative log marginal likelihood.
namespace dugh {

/// Iteration state: spatial variances, dense temporal covariance, and the
/// cached sensor covariance Sigma_y (always consistent with `spatial`).
struct FullDughState {
  SpatialParams spatial;
  Matrix b;        ///< T x T symmetric PD
  Matrix sigma_y;  ///< M x M, recomputed after each spatial update
  int iteration = 0;
};

/// Temporal data moment M_time = (1 / (M G)) sum_g Y_g^T Sigma_y^{-1} Y_g.
Matrix m_time(const TrialSet& trials, const Matrix& sigma_y,
              kernels::ExecPolicy policy = kernels::ExecPolicy::Serial);

/// Geodesic temporal update B <- geometric_mean(B^k, M_time): the unique PD
/// minimizer of the temporal surrogate tr((B^k)^{-1} B) + tr(M_time B^{-1}),
/// characterized by the Riccati equation B (B^k)^{-1} B = M_time.
Matrix update_temporal_full(const FullDughState& state, const Matrix& m_time);

/// Spatial data moment M_space = (1 / (T G)) sum_g Y_g B^{-1} Y_g^T.
Matrix m_space(const TrialSet& trials, const Matrix& b,
               kernels::ExecPolicy policy = kernels::ExecPolicy::Serial);

/// Source-and-noise moment M_SN = H Phi^T Sigma_y^{-1} M_space Sigma_y^{-1}
/// Phi H. Only its diagonal feeds the spatial update; see m_sn_diag for the
/// diagonal-only evaluation used on the hot path.
Matrix m_sn(const FullDughState& state, const AugmentedDesign& phi,
            const Matrix& m_space);

/// diag(M_SN) without forming the (N+M) x (N+M) matrix.
Vector m_sn_diag(const FullDughState& state, const AugmentedDesign& phi,
                 const Matrix& m_space);

/// diag(Phi^T Sigma_y^{-1} Phi): the per-coordinate curvature weights z.
Vector phi_quad_diag(const FullDughState& state, const AugmentedDesign& phi);

/// Closed-form spatial update h_i = max(sqrt(g_i / z_i), h_min) with
/// g = m_sn_diag and z = phi_quad_diag; minimizes the separable convex
/// surrogate sum_i (z_i h_i + g_i / h_i) over nonnegative h. Under the
/// homoscedastic flag the M noise coordinates are pooled:
/// lambda = sqrt(sum_m g_{N+m} / sum_m z_{N+m}).
SpatialParams update_spatial(const FullDughState& state,
                             const AugmentedDesign& phi,
                             const Vector& m_sn_diag, bool homoscedastic);

/// Runs the full solver to convergence. Requires T >= 2 (use the baseline
/// solver for single-sample data) and G >= 1.
FitResult fit_full(const LeadField& lead, const TrialSet& trials,
                   const FitConfig& config);

}  // namespace dugh

#endif  // DUGH_SOLVER_FULL_HPP
