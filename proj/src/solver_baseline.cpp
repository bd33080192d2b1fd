#include "dugh/solver_baseline.hpp"

#include <cmath>

#include "dugh/pdlinalg.hpp"
#include "fit_loop.hpp"

namespace dugh {

namespace {

/// Posterior means under B = identity: xbar_g = Gamma L^T Sigma_y^{-1} Y_g.
std::vector<Matrix> posterior_means(const ChampagneState& state,
                                    const LeadField& lead,
                                    const TrialSet& trials) {
  const Matrix sigma_inv = pdlinalg::safe_inverse(state.sigma_y);
  const Matrix gain = state.spatial.gamma().asDiagonal() *
                      (lead.entries.transpose() * sigma_inv);
  std::vector<Matrix> means;
  means.reserve(trials.blocks.size());
  for (const Matrix& y : trials.blocks) means.push_back(gain * y);
  return means;
}

}  // namespace

Vector update_gamma_champagne(const ChampagneState& state,
                              const LeadField& lead, const TrialSet& trials) {
  if (lead.m_sensors != trials.blocks.front().rows()) {
    throw DimensionError("lead field rows must match trial rows");
  }
  const Matrix sigma_inv = pdlinalg::safe_inverse(state.sigma_y);
  const std::vector<Matrix> means = posterior_means(state, lead, trials);

  const double scale = 1.0 / (static_cast<double>(trials.t_samples) *
                              static_cast<double>(trials.g_trials));
  Vector num = Vector::Zero(lead.n_sources);
  for (const Matrix& xbar : means) {
    num += xbar.rowwise().squaredNorm();
  }
  num *= scale;

  Vector gamma(lead.n_sources);
  for (Index n = 0; n < lead.n_sources; ++n) {
    const double den = lead.entries.col(n).dot(sigma_inv * lead.entries.col(n));
    if (den <= 0.0) throw NumericalError("denominator must be positive");
    gamma[n] = std::max(std::sqrt(num[n] / den), k_h_min);
  }
  return gamma;
}

Vector update_lambda_hetero(const ChampagneState& state, const LeadField& lead,
                            const TrialSet& trials, LambdaVariant variant) {
  const Matrix sigma_inv = pdlinalg::safe_inverse(state.sigma_y);
  const std::vector<Matrix> means = posterior_means(state, lead, trials);

  double scale = 1.0 / static_cast<double>(trials.g_trials);
  if (variant == LambdaVariant::Normalized) {
    scale /= static_cast<double>(trials.t_samples);
  }
  Vector num = Vector::Zero(lead.m_sensors);
  for (std::size_t g = 0; g < means.size(); ++g) {
    const Matrix resid = trials.blocks[g] - lead.entries * means[g];
    num += resid.rowwise().squaredNorm();
  }
  num *= scale;

  Vector lambda(lead.m_sensors);
  for (Index m = 0; m < lead.m_sensors; ++m) {
    const double den = sigma_inv(m, m);
    if (den <= 0.0) throw NumericalError("denominator must be positive");
    lambda[m] = std::max(std::sqrt(num[m] / den), k_h_min);
  }
  return lambda;
}

FitResult fit_champagne(const LeadField& lead, const TrialSet& trials,
                        const FitConfig& config) {
  return detail::fit_mm(lead, trials, config,
                        detail::TemporalStrategy::FrozenIdentity);
}

}  // namespace dugh
