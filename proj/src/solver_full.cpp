#include "dugh/solver_full.hpp"

#include <cmath>

#include "dugh/pdlinalg.hpp"
#include "fit_loop.hpp"

namespace dugh {

Matrix m_time(const TrialSet& trials, const Matrix& sigma_y,
              kernels::ExecPolicy policy) {
  return kernels::accum_time(trials.blocks, pdlinalg::safe_inverse(sigma_y),
                             policy);
}

Matrix update_temporal_full(const FullDughState& state, const Matrix& m_time) {
  return pdlinalg::geometric_mean(state.b, m_time);
}

Matrix m_space(const TrialSet& trials, const Matrix& b,
               kernels::ExecPolicy policy) {
  return kernels::accum_space(trials.blocks, pdlinalg::safe_inverse(b),
                              policy);
}

Matrix m_sn(const FullDughState& state, const AugmentedDesign& phi,
            const Matrix& m_space) {
  const Matrix sigma_inv = pdlinalg::safe_inverse(state.sigma_y);
  const Matrix weighted = phi.phi.transpose() * sigma_inv * m_space *
                          sigma_inv * phi.phi;
  const Matrix h_diag = Matrix(state.spatial.h.asDiagonal());
  return pdlinalg::symmetrized(h_diag * weighted * h_diag);
}

Vector m_sn_diag(const FullDughState& state, const AugmentedDesign& phi,
                 const Matrix& m_space) {
  const Matrix sigma_inv = pdlinalg::safe_inverse(state.sigma_y);
  // g_i = h_i^2 * phi_i^T Sigma^{-1} M_space Sigma^{-1} phi_i, evaluated as
  // column-wise quadratic forms without forming the (N+M) x (N+M) product.
  const Matrix kernel =
      pdlinalg::symmetrized(sigma_inv * m_space * sigma_inv);
  const Matrix weighted = kernel * phi.phi;  // M x (N+M)
  Vector g =
      (phi.phi.array() * weighted.array()).colwise().sum().transpose();
  g = g.cwiseMax(0.0).cwiseProduct(
      state.spatial.h.cwiseProduct(state.spatial.h));
  return g;
}

Vector phi_quad_diag(const FullDughState& state, const AugmentedDesign& phi) {
  const Matrix sigma_inv = pdlinalg::safe_inverse(state.sigma_y);
  const Matrix weighted = sigma_inv * phi.phi;
  return (phi.phi.array() * weighted.array()).colwise().sum().transpose();
}

SpatialParams update_spatial(const FullDughState& state,
                             const AugmentedDesign& phi,
                             const Vector& m_sn_diag, bool homoscedastic) {
  const Index n = state.spatial.n_sources;
  const Index m = state.spatial.m_sensors;
  if (m_sn_diag.size() != n + m) {
    throw DimensionError("m_sn_diag must have N + M entries");
  }
  const Vector z = phi_quad_diag(state, phi);
  Vector h(n + m);
  for (Index i = 0; i < n + m; ++i) {
    if (z[i] <= 0.0) {
      throw NumericalError("curvature weight z must be positive");
    }
    h[i] = std::max(std::sqrt(std::max(m_sn_diag[i], 0.0) / z[i]), k_h_min);
  }
  if (homoscedastic) {
    const double g_sum = m_sn_diag.tail(m).sum();
    const double z_sum = z.tail(m).sum();
    const double lambda =
        std::max(std::sqrt(std::max(g_sum, 0.0) / z_sum), k_h_min);
    h.tail(m).setConstant(lambda);
  }
  return SpatialParams::from_vector(std::move(h), n, m, homoscedastic);
}

FitResult fit_full(const LeadField& lead, const TrialSet& trials,
                   const FitConfig& config) {
  return detail::fit_mm(lead, trials, config,
                        config.freeze_temporal
                            ? detail::TemporalStrategy::FrozenIdentity
                            : detail::TemporalStrategy::FullGeodesic);
}

}  // namespace dugh
