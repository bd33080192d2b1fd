#include "dugh/simgen.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

#include "dugh/io.hpp"
#include "dugh/pdlinalg.hpp"

namespace dugh::simgen {

void SimConfig::validate() const {
  if (n_sources < 1 || m_sensors < 1 || t_samples < 1 || g_trials < 1) {
    throw ValidationError("dimensions must be positive");
  }
  if (n_active < 0 || n_active > n_sources) {
    throw ValidationError("n_active must lie in [0, n_sources]");
  }
  if (ar_order < 1) throw ValidationError("ar_order must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError("alpha must lie strictly inside (0, 1)");
  }
  if (!(std::abs(beta) < 1.0)) {
    throw ValidationError("|beta| must be < 1");
  }
}

bool is_stable(const ARProcess& process) {
  const Index p = process.coeffs.size();
  if (p == 0) return true;
  if (!process.coeffs.allFinite()) return false;
  // Companion matrix of z^P - a_1 z^{P-1} - ... - a_P: eigenvalues are the
  // inverse characteristic roots, so stability means all magnitudes < 1.
  Matrix companion = Matrix::Zero(p, p);
  companion.row(0) = process.coeffs.transpose();
  companion.block(1, 0, p - 1, p - 1) =
      Matrix::Identity(p - 1, p - 1);
  const Eigen::EigenSolver<Matrix> solver(companion, false);
  for (Index i = 0; i < p; ++i) {
    if (std::abs(solver.eigenvalues()[i]) >= 1.0 - 1e-12) return false;
  }
  return true;
}

ARProcess random_stable_ar(int order, Rng& rng) {
  if (order < 1) throw ValidationError("AR order must be >= 1");
  constexpr int k_max_attempts = 1000;
  for (int attempt = 0; attempt < k_max_attempts; ++attempt) {
    // Step-up recursion from reflection coefficients in (-0.95, 0.95):
    // stable by the Levinson-Durbin correspondence.
    Vector a = Vector::Zero(order);
    for (int m = 1; m <= order; ++m) {
      const double k_m = rng.uniform(-0.95, 0.95);
      Vector next = a;
      for (int i = 1; i < m; ++i) {
        next[i - 1] = a[i - 1] - k_m * a[m - i - 1];
      }
      next[m - 1] = k_m;
      a = next;
    }
    ARProcess process{order, a};
    if (is_stable(process)) return process;
  }
  throw NumericalError("failed to draw a stable AR process");
}

Vector simulate_ar(const ARProcess& process, Index t_samples, Rng& rng) {
  if (t_samples < 1) throw ValidationError("t_samples must be >= 1");
  if (!is_stable(process)) throw ValidationError("AR process is unstable");
  const Index p = process.coeffs.size();
  const Index burn_in = 10 * t_samples;
  const Index total = burn_in + t_samples;
  Vector x = Vector::Zero(total);
  for (Index t = 0; t < total; ++t) {
    double value = rng.normal();
    for (Index lag = 1; lag <= std::min<Index>(p, t); ++lag) {
      value += process.coeffs[lag - 1] * x[t - lag];
    }
    x[t] = value;
  }
  return x.tail(t_samples);
}

std::vector<Index> draw_active_rows(Index n_sources, Index n_active,
                                    Rng& rng) {
  if (n_active < 0 || n_active > n_sources) {
    throw ValidationError("n_active must lie in [0, n_sources]");
  }
  // Partial Fisher-Yates: uniform without replacement.
  std::vector<Index> pool(n_sources);
  for (Index i = 0; i < n_sources; ++i) pool[i] = i;
  std::vector<Index> active;
  active.reserve(n_active);
  for (Index i = 0; i < n_active; ++i) {
    const auto pick =
        static_cast<Index>(rng.below(static_cast<std::uint64_t>(n_sources - i)));
    std::swap(pool[i + pick], pool[i]);
    active.push_back(pool[i]);
  }
  return active;
}

Matrix gen_ar_sources(const SimConfig& config, Rng& rng) {
  config.validate();
  std::vector<ARProcess> processes;
  processes.reserve(config.n_active);
  for (Index i = 0; i < config.n_active; ++i) {
    processes.push_back(random_stable_ar(config.ar_order, rng));
  }
  const std::vector<Index> active =
      draw_active_rows(config.n_sources, config.n_active, rng);
  return gen_ar_sources_with(config, processes, active, rng);
}

Matrix gen_ar_sources_with(const SimConfig& config,
                           const std::vector<ARProcess>& processes,
                           const std::vector<Index>& active_rows, Rng& rng) {
  if (processes.size() != active_rows.size()) {
    throw DimensionError("one AR process per active row required");
  }
  Matrix x = Matrix::Zero(config.n_sources, config.t_samples);
  for (std::size_t i = 0; i < active_rows.size(); ++i) {
    const Index row = active_rows[i];
    if (row < 0 || row >= config.n_sources) {
      throw ValidationError("active row index out of range");
    }
    if (x.row(row).cwiseAbs().sum() != 0.0) {
      throw ValidationError("active row indices must be distinct");
    }
    x.row(row) =
        simulate_ar(processes[i], config.t_samples, rng).transpose();
  }
  return x;
}

Vector ar_autocovariance(const ARProcess& process, Index t_samples) {
  if (!is_stable(process)) throw ValidationError("AR process is unstable");
  const Index p = process.coeffs.size();
  // Yule-Walker system for (r_0 .. r_p) with unit innovation variance:
  // r_k - sum_j a_j r_{|k-j|} = delta_{k0}, k = 0..p.
  Matrix system = Matrix::Zero(p + 1, p + 1);
  for (Index k = 0; k <= p; ++k) {
    system(k, k) += 1.0;
    for (Index j = 1; j <= p; ++j) {
      system(k, std::abs(k - j)) -= process.coeffs[j - 1];
    }
  }
  Vector rhs = Vector::Zero(p + 1);
  rhs[0] = 1.0;
  const Vector head = system.fullPivLu().solve(rhs);

  Vector r(std::max(t_samples, p + 1));
  r.head(p + 1) = head;
  for (Index k = p + 1; k < r.size(); ++k) {
    double acc = 0.0;
    for (Index j = 1; j <= p; ++j) acc += process.coeffs[j - 1] * r[k - j];
    r[k] = acc;
  }
  return r.head(t_samples);
}

Matrix mix_noise(const Matrix& signal, const Matrix& noise, double alpha) {
  if (signal.rows() != noise.rows() || signal.cols() != noise.cols()) {
    throw DimensionError("signal and noise shapes differ");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError("alpha must lie strictly inside (0, 1)");
  }
  const double signal_norm = signal.norm();
  const double noise_norm = noise.norm();
  if (signal_norm <= 0.0) throw ValidationError("signal has zero norm");
  if (noise_norm <= 0.0) throw ValidationError("noise has zero norm");
  const double scale = (1.0 - alpha) * signal_norm / (alpha * noise_norm);
  return signal + scale * noise;
}

double snr_from_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError("alpha must lie strictly inside (0, 1)");
  }
  return 20.0 * std::log10(alpha / (1.0 - alpha));
}

Matrix gen_temporal_cov(TemporalKind kind, Index t_samples, double beta,
                        Rng& rng) {
  if (t_samples < 1) throw ValidationError("t_samples must be >= 1");
  if (kind == TemporalKind::ToeplitzAr1) {
    if (!(std::abs(beta) < 1.0)) throw ValidationError("|beta| must be < 1");
    Matrix b(t_samples, t_samples);
    for (Index i = 0; i < t_samples; ++i) {
      for (Index j = 0; j < t_samples; ++j) {
        b(i, j) = std::pow(beta, std::abs(i - j));
      }
    }
    return b;
  }
  const Matrix w = rng.normal_matrix(t_samples, t_samples);
  Matrix b = w * w.transpose() / static_cast<double>(t_samples);
  b.diagonal().array() += 1e-6;
  return pdlinalg::symmetrized(b);
}

Matrix sample_kron_sources(const Vector& gamma, const Matrix& b, Rng& rng) {
  const Index t = b.rows();
  const Matrix chol = pdlinalg::pd_sqrt(b);
  Matrix x(gamma.size(), t);
  for (Index i = 0; i < gamma.size(); ++i) {
    if (gamma[i] < 0.0) throw ValidationError("gamma must be nonnegative");
    x.row(i) = std::sqrt(gamma[i]) * (chol * rng.normal_vector(t)).transpose();
  }
  return x;
}

TrialSet gen_trialset_kron(const Vector& gamma, const Matrix& b,
                           const LeadField& lead, Index g_trials, double alpha,
                           Rng& rng) {
  if (gamma.size() != lead.n_sources) {
    throw DimensionError("gamma length must match the lead field sources");
  }
  if (g_trials < 1) throw ValidationError("g_trials must be >= 1");
  const Index t = b.rows();
  const Matrix chol = pdlinalg::pd_sqrt(b);
  std::vector<Matrix> blocks;
  blocks.reserve(g_trials);
  for (Index g = 0; g < g_trials; ++g) {
    const Matrix x = sample_kron_sources(gamma, b, rng);
    const Matrix signal = lead.entries * x;
    Matrix noise(lead.m_sensors, t);
    for (Index row = 0; row < lead.m_sensors; ++row) {
      noise.row(row) = (chol * rng.normal_vector(t)).transpose();
    }
    if (signal.norm() <= 0.0) {
      blocks.push_back(noise);
    } else {
      blocks.push_back(mix_noise(signal, noise, alpha));
    }
  }
  return TrialSet::from_blocks(std::move(blocks));
}

LeadField load_lead_field(const std::string& path, bool normalize_columns) {
  return LeadField::from_matrix(io::load_matrix(path), normalize_columns);
}

LeadField gen_lead_field_synthetic(Index m_sensors, Index n_sources,
                                   Rng& rng) {
  if (m_sensors < 1 || n_sources < 1) {
    throw ValidationError("lead field dimensions must be positive");
  }
  return LeadField::from_matrix(rng.normal_matrix(m_sensors, n_sources),
                                /*normalize_columns=*/true);
}

}  // namespace dugh::simgen
