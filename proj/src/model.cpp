#include "dugh/model.hpp"

#include <cmath>

#include "dugh/pdlinalg.hpp"

namespace dugh {

namespace {

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) {
    throw ValidationError(std::string(what) + " contains non-finite entries");
  }
}

}  // namespace

LeadField LeadField::from_matrix(Matrix entries, bool normalize_columns) {
  if (entries.rows() < 1 || entries.cols() < 1) {
    throw ValidationError("lead field must be non-empty");
  }
  require_finite(entries, "lead field");
  if (normalize_columns) {
    for (Index j = 0; j < entries.cols(); ++j) {
      const double norm = entries.col(j).norm();
      if (norm <= 0.0) {
        throw ValidationError("lead field column " + std::to_string(j) +
                              " has zero norm; cannot normalize");
      }
      entries.col(j) /= norm;
    }
  }
  LeadField lead;
  lead.m_sensors = entries.rows();
  lead.n_sources = entries.cols();
  lead.entries = std::move(entries);
  return lead;
}

AugmentedDesign AugmentedDesign::from_lead(const LeadField& lead) {
  AugmentedDesign aug;
  aug.phi.resize(lead.m_sensors, lead.n_sources + lead.m_sensors);
  aug.phi.leftCols(lead.n_sources) = lead.entries;
  aug.phi.rightCols(lead.m_sensors) =
      Matrix::Identity(lead.m_sensors, lead.m_sensors);
  return aug;
}

TrialSet TrialSet::from_blocks(std::vector<Matrix> blocks) {
  if (blocks.empty()) throw ValidationError("trial set must hold >= 1 trial");
  const Index m = blocks.front().rows();
  const Index t = blocks.front().cols();
  if (m < 1 || t < 1) throw ValidationError("trials must be non-empty");
  for (std::size_t g = 0; g < blocks.size(); ++g) {
    if (blocks[g].rows() != m || blocks[g].cols() != t) {
      throw DimensionError("trial " + std::to_string(g) +
                           " shape differs from trial 0");
    }
    require_finite(blocks[g], "trial block");
  }
  TrialSet trials;
  trials.g_trials = static_cast<Index>(blocks.size());
  trials.t_samples = t;
  trials.blocks = std::move(blocks);
  return trials;
}

SpatialParams SpatialParams::from_vector(Vector h, Index n_sources,
                                         Index m_sensors, bool homoscedastic) {
  if (n_sources < 1 || m_sensors < 1) {
    throw ValidationError("spatial params need n_sources >= 1, m_sensors >= 1");
  }
  if (h.size() != n_sources + m_sensors) {
    throw DimensionError("h must have n_sources + m_sensors entries");
  }
  if (!h.allFinite()) {
    throw ValidationError("h contains non-finite entries");
  }
  for (Index i = 0; i < h.size(); ++i) {
    if (h[i] < 0.0) throw ValidationError("h entries must be nonnegative");
    h[i] = std::max(h[i], k_h_min);
  }
  if (homoscedastic) {
    const double lambda0 = h[n_sources];
    for (Index m = 0; m < m_sensors; ++m) {
      if (h[n_sources + m] != lambda0) {
        throw ValidationError(
            "homoscedastic params require identical noise entries");
      }
    }
  }
  SpatialParams spatial;
  spatial.h = std::move(h);
  spatial.n_sources = n_sources;
  spatial.m_sensors = m_sensors;
  spatial.homoscedastic = homoscedastic;
  return spatial;
}

void validate_temporal(const TemporalModel& temporal) {
  if (const auto* full = std::get_if<FullTemporal>(&temporal)) {
    if (full->b.rows() < 1 || full->b.rows() != full->b.cols()) {
      throw ValidationError("temporal covariance must be square, T >= 1");
    }
    if (!pdlinalg::is_symmetric(full->b)) {
      throw ValidationError("temporal covariance must be symmetric");
    }
    const auto eig = pdlinalg::sym_eig(full->b);
    if (eig.values[eig.values.size() - 1] <= 0.0) {
      throw ValidationError("temporal covariance must be positive definite");
    }
    return;
  }
  const auto& spec = std::get<SpectrumTemporal>(temporal);
  if (spec.t_samples < 1) throw ValidationError("spectrum needs T >= 1");
  if (spec.embed_len < 2 * spec.t_samples - 1) {
    throw ValidationError(
        "embedding length must be >= 2T - 1 for a symmetric embedding");
  }
  if (spec.p.size() != spec.embed_len) {
    throw DimensionError("spectrum length must equal embedding length");
  }
  for (Index l = 0; l < spec.p.size(); ++l) {
    if (!std::isfinite(spec.p[l]) || spec.p[l] < k_p_min) {
      throw ValidationError("spectrum entries must be >= the floor");
    }
  }
}

Matrix dense_b(const TemporalModel& temporal) {
  if (const auto* full = std::get_if<FullTemporal>(&temporal)) {
    return full->b;
  }
  const auto& spec = std::get<SpectrumTemporal>(temporal);
  // b_jk = (1/L) sum_l p_l cos(2 pi l (j - k) / L): the leading T x T block of
  // the circulant with spectrum p. Real by the Hermitian symmetry of p.
  const Index big_l = spec.embed_len;
  Vector lag = Vector::Zero(big_l);
  for (Index d = 0; d < big_l; ++d) {
    double acc = 0.0;
    for (Index l = 0; l < big_l; ++l) {
      acc += spec.p[l] *
             std::cos(2.0 * kPi * static_cast<double>(l) *
                      static_cast<double>(d) / static_cast<double>(big_l));
    }
    lag[d] = acc / static_cast<double>(big_l);
  }
  Matrix b(spec.t_samples, spec.t_samples);
  for (Index j = 0; j < spec.t_samples; ++j) {
    for (Index k = 0; k < spec.t_samples; ++k) {
      b(j, k) = lag[std::abs(j - k)];
    }
  }
  return pdlinalg::symmetrized(b);
}

Matrix sigma_y(const SpatialParams& spatial, const LeadField& lead) {
  if (lead.n_sources != spatial.n_sources ||
      lead.m_sensors != spatial.m_sensors) {
    throw DimensionError("lead field and spatial params disagree on M or N");
  }
  Matrix cov = lead.entries * spatial.gamma().asDiagonal() *
               lead.entries.transpose();
  cov.diagonal() += spatial.lambda();
  return pdlinalg::symmetrized(cov);
}

double nll_kron(const SpatialParams& spatial, const TemporalModel& temporal,
                const TrialSet& trials, const LeadField& lead) {
  validate_temporal(temporal);
  const Matrix b = dense_b(temporal);
  if (b.rows() != trials.t_samples) {
    throw DimensionError("temporal size must match trial columns");
  }
  if (lead.m_sensors != trials.blocks.front().rows()) {
    throw DimensionError("lead field rows must match trial rows");
  }
  const Matrix cov_y = sigma_y(spatial, lead);
  const Matrix cov_y_inv = pdlinalg::safe_inverse(cov_y);
  const Matrix b_inv = pdlinalg::safe_inverse(b);

  const double t = static_cast<double>(trials.t_samples);
  const double m = static_cast<double>(lead.m_sensors);
  double fit = 0.0;
  for (const Matrix& y : trials.blocks) {
    fit += (cov_y_inv * y * b_inv * y.transpose()).trace();
  }
  fit /= static_cast<double>(trials.g_trials);
  const double value =
      t * pdlinalg::logdet_pd(cov_y) + m * pdlinalg::logdet_pd(b) + fit;
  if (!std::isfinite(value)) {
    throw NumericalError("negative log-likelihood is not finite");
  }
  return value;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

std::vector<Matrix> naive_posterior_mean(const SpatialParams& spatial,
                                         const TemporalModel& temporal,
                                         const LeadField& lead,
                                         const TrialSet& trials) {
  const Matrix b = dense_b(temporal);
  const Index t = trials.t_samples;
  const Index n = lead.n_sources;
  if (b.rows() != t) throw DimensionError("temporal size mismatch");

  // Sigma_0 D^T (Sigma_y (x) B)^{-1} with Sigma_0 = Gamma (x) B and
  // D = L (x) I_T, all dense in the vec(X^T) ordering (time fastest).
  const Matrix sigma0 = kron(Matrix(spatial.gamma().asDiagonal()), b);
  const Matrix design = kron(lead.entries, Matrix::Identity(t, t));
  const Matrix cov_big = kron(sigma_y(spatial, lead), b);
  const Matrix gain =
      sigma0 * design.transpose() * pdlinalg::safe_inverse(cov_big);

  std::vector<Matrix> means;
  means.reserve(trials.blocks.size());
  for (const Matrix& y : trials.blocks) {
    // vec(Y^T): stack rows of Y (sensor-major, time fastest).
    Vector y_vec(y.rows() * t);
    for (Index i = 0; i < y.rows(); ++i) {
      y_vec.segment(i * t, t) = y.row(i).transpose();
    }
    const Vector x_vec = gain * y_vec;
    Matrix x(n, t);
    for (Index i = 0; i < n; ++i) {
      x.row(i) = x_vec.segment(i * t, t).transpose();
    }
    means.push_back(std::move(x));
  }
  return means;
}

Matrix naive_posterior_cov(const SpatialParams& spatial,
                           const TemporalModel& temporal,
                           const LeadField& lead) {
  const Matrix b = dense_b(temporal);
  const Index t = b.rows();
  const Matrix sigma0 = kron(Matrix(spatial.gamma().asDiagonal()), b);
  const Matrix design = kron(lead.entries, Matrix::Identity(t, t));
  const Matrix cov_big = kron(sigma_y(spatial, lead), b);
  const Matrix gain =
      sigma0 * design.transpose() * pdlinalg::safe_inverse(cov_big);
  return pdlinalg::symmetrized(sigma0 - gain * design * sigma0);
}

}  // namespace dugh
