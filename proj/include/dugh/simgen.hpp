#ifndef DUGH_SIMGEN_HPP
#define DUGH_SIMGEN_HPP

#include <string>
#include <vector>

#include "dugh/model.hpp"
#include "dugh/rng.hpp"

/// Synthetic data generation: stable AR source time courses,
/// Frobenius-calibrated noise mixing at a target SNR, Kronecker-structured
/// trial sampling for covariance-recovery experiments, and lead-field
/// acquisition. All generators are pure functions of (config, seed).
namespace dugh::simgen {

/// Autoregressive process x(t) = sum_p coeffs[p-1] * x(t-p) + xi(t) with
/// standard-normal innovations. Invariant: all characteristic roots strictly
/// inside the unit circle.
struct ARProcess {
  int order = 0;
  Vector coeffs;
};

/// Experiment dimensions and knobs.
struct SimConfig {
  Index n_sources = 0;
  Index n_active = 0;
  Index m_sensors = 0;
  Index t_samples = 0;
  int ar_order = 1;
  double alpha = 0.5;  ///< mixing parameter in (0, 1)
  Index g_trials = 1;
  double beta = 0.8;  ///< AR(1) Toeplitz parameter, |beta| < 1
  std::uint64_t seed = 0;

  /// Throws ValidationError on any violated bound.
  void validate() const;
};

/// True when all roots of 1 - a_1 z - ... - a_P z^P lie outside the closed
/// unit disc (equivalently: companion-matrix eigenvalues inside it).
bool is_stable(const ARProcess& process);

/// Draws a stable AR(P) process: reflection coefficients uniform in
/// (-0.95, 0.95) mapped through the step-up recursion (stable by
/// construction), with a stability re-check and bounded resampling as a
/// safety net.
ARProcess random_stable_ar(int order, Rng& rng);

/// Simulates one realization of the process: `t_samples` values after
/// discarding a burn-in of 10 * t_samples, starting from a zero state.
Vector simulate_ar(const ARProcess& process, Index t_samples, Rng& rng);

/// Uniform draw of n_active distinct row indices out of n_sources.
std::vector<Index> draw_active_rows(Index n_sources, Index n_active, Rng& rng);

/// N x T source matrix with exactly n_active nonzero rows at uniformly random
/// distinct indices; each active row is an independent realization of its own
/// random stable AR(config.ar_order) process.
Matrix gen_ar_sources(const SimConfig& config, Rng& rng);

/// As above with caller-chosen processes and row indices (deterministic
/// variant used by tests and by callers that need the generating process).
Matrix gen_ar_sources_with(const SimConfig& config,
                           const std::vector<ARProcess>& processes,
                           const std::vector<Index>& active_rows, Rng& rng);

/// Theoretical stationary autocovariance (r_0 .. r_{t_samples-1}) of the
/// process with unit innovation variance, from the Yule-Walker equations.
Vector ar_autocovariance(const ARProcess& process, Index t_samples);

/// Y = signal + ((1 - alpha) ||signal||_F / (alpha ||noise||_F)) * noise;
/// the added term's Frobenius norm is exactly (1-alpha)/alpha times the
/// signal's. Zero-norm signal or noise is rejected.
Matrix mix_noise(const Matrix& signal, const Matrix& noise, double alpha);

/// SNR = 20 log10(alpha / (1 - alpha)) in decibels.
double snr_from_alpha(double alpha);

enum class TemporalKind { FullRandom, ToeplitzAr1 };

/// ToeplitzAr1: B_ij = beta^|i-j| exactly. FullRandom: W W^T / T + 1e-6 I
/// with W a T x T standard-normal draw.
Matrix gen_temporal_cov(TemporalKind kind, Index t_samples, double beta,
                        Rng& rng);

/// N x T draw with vec(X^T) ~ N(0, Gamma (x) B): row i = sqrt(gamma_i) *
/// (chol(B) z_i)^T with independent standard-normal z_i.
Matrix sample_kron_sources(const Vector& gamma, const Matrix& b, Rng& rng);

/// G trials of Y = mix(L X, E) where X and the noise E are fresh draws per
/// trial, both with temporal covariance B (E has unit spatial scale before
/// mixing). A zero-signal draw (gamma = 0) yields the unmixed noise.
TrialSet gen_trialset_kron(const Vector& gamma, const Matrix& b,
                           const LeadField& lead, Index g_trials, double alpha,
                           Rng& rng);

/// Reads a lead field from the shared matrix format.
LeadField load_lead_field(const std::string& path,
                          bool normalize_columns = false);

/// Standard-normal entries with every column scaled to unit Euclidean norm.
LeadField gen_lead_field_synthetic(Index m_sensors, Index n_sources, Rng& rng);

}  // namespace dugh::simgen

#endif  // DUGH_SIMGEN_HPP
