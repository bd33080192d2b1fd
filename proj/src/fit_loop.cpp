#include "fit_loop.hpp"

#include <cmath>
#include <utility>

#include "dugh/pdlinalg.hpp"
#include "dugh/rng.hpp"
#include "dugh/solver_full.hpp"

namespace dugh::detail {

namespace {

Vector initial_h(const FitConfig& config, Index n, Index m) {
  if (config.init_h.size() > 0) {
    if (config.init_h.size() != n + m) {
      throw DimensionError("init_h must have N + M entries");
    }
    return config.init_h;
  }
  Rng rng(config.seed);
  Vector h(n + m);
  for (Index i = 0; i < n; ++i) h[i] = std::abs(rng.normal());
  if (config.homoscedastic) {
    h.tail(m).setConstant(std::abs(rng.normal()));
  } else {
    for (Index i = 0; i < m; ++i) h[n + i] = std::abs(rng.normal());
  }
  return h;
}

}  // namespace

FitResult fit_mm(const LeadField& lead, const TrialSet& trials,
                 const FitConfig& config, TemporalStrategy strategy) {
  if (lead.m_sensors != trials.blocks.front().rows()) {
    throw DimensionError("lead field rows must match trial rows");
  }
  if (config.epsilon <= 0.0) throw ValidationError("epsilon must be positive");
  if (config.k_max < 1) throw ValidationError("k_max must be >= 1");
  const Index n = lead.n_sources;
  const Index m = lead.m_sensors;
  const Index t = trials.t_samples;
  if (t < 2 && strategy != TemporalStrategy::FrozenIdentity) {
    throw ValidationError(
        "temporal learning needs T >= 2; use the baseline solver for T = 1");
  }

  SpatialParams spatial = SpatialParams::from_vector(
      initial_h(config, n, m), n, m, config.homoscedastic);
  const AugmentedDesign phi = AugmentedDesign::from_lead(lead);

  Matrix b = Matrix::Identity(t, t);
  CirculantBasis basis;
  Vector p;
  if (strategy == TemporalStrategy::ToeplitzSpectrum) {
    const Index embed = config.embed_len > 0 ? config.embed_len : 2 * t + 1;
    if (embed < 2 * t - 1) {
      throw ValidationError("embedding length must be >= 2T - 1");
    }
    basis = CirculantBasis::make(t, embed);
    p = Vector::Ones(embed);
  }
  auto temporal_now = [&]() -> TemporalModel {
    if (strategy == TemporalStrategy::ToeplitzSpectrum) {
      return SpectrumTemporal{p, t, basis.embed_len};
    }
    return FullTemporal{b};
  };

  Matrix sigma = sigma_y(spatial, lead);

  FitResult result;
  result.nll_trace.push_back(nll_kron(spatial, temporal_now(), trials, lead));

  auto posterior = [&]() -> std::vector<Matrix> {
    if (strategy == TemporalStrategy::ToeplitzSpectrum) {
      return efficient_posterior_means(spatial, p, basis, lead, trials.blocks,
                                       config.policy);
    }
    const Matrix gain = spatial.gamma().asDiagonal() *
                        (lead.entries.transpose() *
                         pdlinalg::safe_inverse(sigma));
    return kernels::apply_gain(gain, trials.blocks, config.policy);
  };

  std::vector<Matrix> means;
  bool converged = false;
  int completed = 0;
  Index clip_total = 0;

  for (int k = 0; k < config.k_max; ++k) {
    std::vector<Matrix> next = posterior();
    if (k > 0) {
      const double base =
          std::sqrt(kernels::sq_norm(means, config.policy));
      const double delta =
          std::sqrt(kernels::diff_sq_norm(next, means, config.policy));
      if (delta <= config.epsilon * std::max(base, 1e-300)) {
        converged = true;
        means = std::move(next);
        break;
      }
    }
    means = std::move(next);

    const Matrix sigma_inv = pdlinalg::safe_inverse(sigma);

    if (strategy != TemporalStrategy::FrozenIdentity) {
      Matrix mt = kernels::accum_time(trials.blocks, sigma_inv, config.policy);
      // All-zero data drives M_time to zero; floor it so the geometric-mean
      // step stays well-posed (the spatial step then prunes every source).
      if (mt.trace() < k_h_min * static_cast<double>(t)) {
        mt.diagonal().array() += k_h_min;
      }
      if (strategy == TemporalStrategy::FullGeodesic) {
        // M_time loses rank whenever T > M*G.  update_temporal_full requires
        // "P.D. after jitter": repair here with the standard jitter shift so
        // the geodesic step never conjugates an exact null space through an
        // ill-conditioned B^{-1/2}.
        const double jitter =
            k_jitter_eps * mt.trace() / static_cast<double>(t);
        if (pdlinalg::sym_eig(mt).values(t - 1) < jitter) {
          mt.diagonal().array() += jitter;
        }
        const FullDughState state{spatial, b, sigma, k};
        b = update_temporal_full(state, mt);
      } else {
        Index clips = 0;
        p = update_spectrum(p, b, mt, basis, &clips);
        clip_total += clips;
        b = build_b_from_spectrum(p, basis);
      }
    }

    // Spatial step: spatial moment with the updated temporal covariance, all
    // sensor-space weights still at the pre-update Sigma_y.
    const Matrix b_inv = strategy == TemporalStrategy::FrozenIdentity
                             ? Matrix::Identity(t, t)
                             : pdlinalg::safe_inverse(b);
    const Matrix mspace =
        kernels::accum_space(trials.blocks, b_inv, config.policy);
    const FullDughState state{spatial, b, sigma, k};
    const Vector g = m_sn_diag(state, phi, mspace);
    spatial = update_spatial(state, phi, g, config.homoscedastic);
    sigma = sigma_y(spatial, lead);

    ++completed;
    result.nll_trace.push_back(
        nll_kron(spatial, temporal_now(), trials, lead));
  }

  result.posterior_means = converged ? std::move(means) : posterior();
  result.spatial = std::move(spatial);
  result.temporal = temporal_now();
  result.converged = converged;
  result.iterations = completed;
  result.spectrum_clips = clip_total;
  return result;
}

}  // namespace dugh::detail
