#include "dugh/solver_thin.hpp"

#include <cmath>
#include <complex>
#include <iostream>

#include "dugh/pdlinalg.hpp"
#include "fit_loop.hpp"

namespace dugh {

CirculantBasis CirculantBasis::make(Index t_samples, Index embed_len) {
  if (t_samples < 1) throw ValidationError("basis needs T >= 1");
  if (embed_len < t_samples) {
    throw ValidationError("embedding length must be >= T");
  }
  CirculantBasis basis;
  basis.t_samples = t_samples;
  basis.embed_len = embed_len;
  basis.q.resize(t_samples, embed_len);
  const double scale = 1.0 / std::sqrt(static_cast<double>(embed_len));
  for (Index m = 0; m < t_samples; ++m) {
    for (Index l = 0; l < embed_len; ++l) {
      const double angle = 2.0 * kPi * static_cast<double>(m) *
                           static_cast<double>(l) /
                           static_cast<double>(embed_len);
      basis.q(m, l) =
          std::complex<double>(scale * std::cos(angle), scale * std::sin(angle));
    }
  }
  return basis;
}

PiWeights PiWeights::make(const Vector& p, const Vector& d, double sigma2) {
  if (sigma2 <= 0.0) throw ValidationError("noise variance must be positive");
  PiWeights pi;
  pi.values.resize(p.size(), d.size());
  for (Index l = 0; l < p.size(); ++l) {
    if (p[l] <= 0.0) throw ValidationError("spectrum must be positive");
    for (Index m = 0; m < d.size(); ++m) {
      const double denom = p[l] * (sigma2 + std::max(d[m], 0.0));
      pi.values(l, m) = 1.0 / denom;
    }
  }
  if (!pi.values.allFinite()) {
    throw NumericalError("posterior weights are not finite");
  }
  return pi;
}

Vector toeplitz_spectrum(const Vector& first_row, Index embed_len,
                         Index* clip_count) {
  const Index t = first_row.size();
  if (t < 1) throw ValidationError("first row must be non-empty");
  if (embed_len < 2 * t - 1) {
    throw ValidationError("embedding length must be >= 2T - 1");
  }

  // Embedding first row: c_0..c_{T-1} copy the Toeplitz coefficients,
  // c_{L-j} = c_j mirrors them, and the free middle positions repeat the
  // last coefficient so the sequence stays continuous.
  Vector c = Vector::Constant(embed_len, first_row[t - 1]);
  for (Index j = 0; j < t; ++j) c[j] = first_row[j];
  for (Index j = 1; j < t; ++j) c[embed_len - j] = first_row[j];

  // Unnormalized DFT of a real symmetric sequence: real cosine sums.
  Vector p(embed_len);
  Index clips = 0;
  for (Index l = 0; l < embed_len; ++l) {
    double acc = 0.0;
    for (Index j = 0; j < embed_len; ++j) {
      acc += c[j] * std::cos(2.0 * kPi * static_cast<double>(j) *
                             static_cast<double>(l) /
                             static_cast<double>(embed_len));
    }
    if (acc < k_p_min) {
      acc = k_p_min;
      ++clips;
    }
    p[l] = acc;
  }
  if (clip_count) *clip_count = clips;
  if (clips * 10 > embed_len) {
    std::cerr << "warning: circulant embedding clipped " << clips << " of "
              << embed_len << " eigenvalues to the positivity floor\n";
  }
  return p;
}

Matrix build_b_from_spectrum(const Vector& p, const CirculantBasis& basis) {
  if (p.size() != basis.embed_len) {
    throw DimensionError("spectrum length must match the embedding length");
  }
  const CVector p_c = p.cast<std::complex<double>>();
  const Matrix b = (basis.q * p_c.asDiagonal() * basis.q.adjoint()).real();
  return pdlinalg::symmetrized(b);
}

Vector update_spectrum(const Vector& p_k, const Matrix& b_k,
                       const Matrix& m_time, const CirculantBasis& basis,
                       Index* clip_count) {
  if (p_k.size() != basis.embed_len) {
    throw DimensionError("spectrum length must match the embedding length");
  }
  if (b_k.rows() != basis.t_samples || m_time.rows() != basis.t_samples) {
    throw DimensionError("temporal matrices must be T x T");
  }
  const Matrix b_inv = pdlinalg::safe_inverse(b_k);

  // z_l = q_l^H B^{-1} q_l and g_l = p_l^2 q_l^H B^{-1} M B^{-1} q_l: column
  // quadratic forms, real and nonnegative for Hermitian PSD middles.
  const CMatrix b_inv_c = b_inv.cast<std::complex<double>>();
  const CMatrix m_time_c = m_time.cast<std::complex<double>>();
  const CMatrix binv_q = b_inv_c * basis.q;
  const CMatrix w_q = b_inv_c * (m_time_c * binv_q);
  Vector z(p_k.size());
  Vector raw_g(p_k.size());
  for (Index l = 0; l < p_k.size(); ++l) {
    z[l] = basis.q.col(l).dot(binv_q.col(l)).real();
    raw_g[l] = basis.q.col(l).dot(w_q.col(l)).real();
  }

  Vector p(p_k.size());
  Index clips = 0;
  for (Index l = 0; l < p_k.size(); ++l) {
    if (z[l] <= 0.0) {
      throw NumericalError("spectral curvature weight must be positive");
    }
    const double g = std::max(raw_g[l], 0.0) * p_k[l] * p_k[l];
    double value = std::sqrt(g / z[l]);
    if (value < k_p_min) {
      value = k_p_min;
      ++clips;
    }
    p[l] = value;
  }
  if (clip_count) *clip_count = clips;
  return p;
}

namespace {

/// Trial-independent factors of the efficient posterior. Data and lead field
/// are whitened by Lambda^{-1/2} so every sensor has unit noise variance; the
/// source-space output needs no unwhitening.
struct PosteriorPlan {
  Matrix left;       ///< N x M: Gamma (whitened L)^T U
  Matrix rotate;     ///< M x M: Lambda^{-1/2} U (applied to raw trials)
  CMatrix weights;   ///< L x M: P Pi, cast complex for the elementwise mask
  const CirculantBasis* basis = nullptr;
};

PosteriorPlan make_plan(const SpatialParams& spatial, const Vector& p,
                        const CirculantBasis& basis, const LeadField& lead) {
  const Vector lam_isqrt = spatial.lambda().cwiseSqrt().cwiseInverse();
  const Matrix w_lead = lam_isqrt.asDiagonal() * lead.entries;
  const Matrix source_cov = pdlinalg::symmetrized(
      w_lead * spatial.gamma().asDiagonal() * w_lead.transpose());
  const auto eig = pdlinalg::sym_eig(source_cov);
  const PiWeights pi = PiWeights::make(p, eig.values, 1.0);

  PosteriorPlan plan;
  plan.left = spatial.gamma().asDiagonal() *
              (w_lead.transpose() * eig.vectors);
  plan.rotate = lam_isqrt.asDiagonal() * eig.vectors;
  plan.weights =
      (p.asDiagonal() * pi.values).cast<std::complex<double>>();
  plan.basis = &basis;
  return plan;
}

/// xbar^T = Re( Q P (Pi .* (Q^H Y^T Lambda^{-1/2} U)) ) U^T L~ Gamma,
/// assembled as xbar = left * Re(...)^T.
Matrix apply_plan(const PosteriorPlan& plan, const Matrix& trial) {
  const Matrix rotated = trial.transpose() * plan.rotate;  // T x M
  const CMatrix z = plan.basis->q.adjoint() *
                    rotated.cast<std::complex<double>>();  // L x M
  const CMatrix recon = plan.basis->q * z.cwiseProduct(plan.weights);
  return plan.left * recon.real().transpose();
}

}  // namespace

Matrix efficient_posterior_mean(const SpatialParams& spatial, const Vector& p,
                                const CirculantBasis& basis,
                                const LeadField& lead, const Matrix& trial) {
  if (trial.rows() != lead.m_sensors || trial.cols() != basis.t_samples) {
    throw DimensionError("trial must be M x T");
  }
  if (p.size() != basis.embed_len) {
    throw DimensionError("spectrum length must match the embedding length");
  }
  return apply_plan(make_plan(spatial, p, basis, lead), trial);
}

namespace detail {

std::vector<Matrix> efficient_posterior_means(
    const SpatialParams& spatial, const Vector& p, const CirculantBasis& basis,
    const LeadField& lead, const std::vector<Matrix>& trials,
    kernels::ExecPolicy policy) {
  const PosteriorPlan plan = make_plan(spatial, p, basis, lead);
  return kernels::map_trials(
      trials, [&](const Matrix& y) { return apply_plan(plan, y); }, policy);
}

}  // namespace detail

FitResult fit_thin(const LeadField& lead, const TrialSet& trials,
                   const FitConfig& config) {
  return detail::fit_mm(lead, trials, config,
                        detail::TemporalStrategy::ToeplitzSpectrum);
}

}  // namespace dugh
