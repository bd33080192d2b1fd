#include "dugh/kernels.hpp"

#ifdef DUGH_HAS_OPENMP
#include <omp.h>
#endif

namespace dugh::kernels {

namespace {

void require_same_shape(const std::vector<Matrix>& trials) {
  if (trials.empty()) throw ValidationError("kernel needs >= 1 trial");
  for (const Matrix& y : trials) {
    if (y.rows() != trials.front().rows() ||
        y.cols() != trials.front().cols()) {
      throw DimensionError("trial shapes differ");
    }
  }
}

/// Computes partial[g] = f(g) for all g - in trial order under Serial, across
/// OpenMP threads under Parallel - then leaves the fixed-order reduction to
/// the caller. The per-slot writes make the result independent of the
/// scheduling.
template <typename Fn>
void for_each_trial(Index count, ExecPolicy policy, Fn&& fn) {
  if (policy == ExecPolicy::Parallel) {
#ifdef DUGH_HAS_OPENMP
#pragma omp parallel for schedule(static)
    for (Index g = 0; g < count; ++g) fn(g);
    return;
#endif
  }
  for (Index g = 0; g < count; ++g) fn(g);
}

}  // namespace

int max_threads() {
#ifdef DUGH_HAS_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

bool has_openmp() {
#ifdef DUGH_HAS_OPENMP
  return true;
#else
  return false;
#endif
}

Matrix accum_time(const std::vector<Matrix>& trials, const Matrix& weight,
                  ExecPolicy policy) {
  require_same_shape(trials);
  const Index m = trials.front().rows();
  const Index t = trials.front().cols();
  if (weight.rows() != m || weight.cols() != m) {
    throw DimensionError("time-accumulation weight must be M x M");
  }
  std::vector<Matrix> partial(trials.size());
  for_each_trial(static_cast<Index>(trials.size()), policy, [&](Index g) {
    partial[g].noalias() = trials[g].transpose() * weight * trials[g];
  });
  Matrix acc = Matrix::Zero(t, t);
  for (const Matrix& p : partial) acc += p;
  acc /= static_cast<double>(m) * static_cast<double>(trials.size());
  return 0.5 * (acc + acc.transpose());
}

Matrix accum_space(const std::vector<Matrix>& trials, const Matrix& weight,
                   ExecPolicy policy) {
  require_same_shape(trials);
  const Index m = trials.front().rows();
  const Index t = trials.front().cols();
  if (weight.rows() != t || weight.cols() != t) {
    throw DimensionError("space-accumulation weight must be T x T");
  }
  std::vector<Matrix> partial(trials.size());
  for_each_trial(static_cast<Index>(trials.size()), policy, [&](Index g) {
    partial[g].noalias() = trials[g] * weight * trials[g].transpose();
  });
  Matrix acc = Matrix::Zero(m, m);
  for (const Matrix& p : partial) acc += p;
  acc /= static_cast<double>(t) * static_cast<double>(trials.size());
  return 0.5 * (acc + acc.transpose());
}

std::vector<Matrix> apply_gain(const Matrix& gain,
                               const std::vector<Matrix>& trials,
                               ExecPolicy policy) {
  require_same_shape(trials);
  if (gain.cols() != trials.front().rows()) {
    throw DimensionError("gain columns must match trial rows");
  }
  std::vector<Matrix> out(trials.size());
  for_each_trial(static_cast<Index>(trials.size()), policy, [&](Index g) {
    out[g].noalias() = gain * trials[g];
  });
  return out;
}

std::vector<Matrix> map_trials(const std::vector<Matrix>& trials,
                               const std::function<Matrix(const Matrix&)>& fn,
                               ExecPolicy policy) {
  require_same_shape(trials);
  std::vector<Matrix> out(trials.size());
  for_each_trial(static_cast<Index>(trials.size()), policy,
                 [&](Index g) { out[g] = fn(trials[g]); });
  return out;
}

double diff_sq_norm(const std::vector<Matrix>& a, const std::vector<Matrix>& b,
                    ExecPolicy policy) {
  if (a.size() != b.size()) throw DimensionError("trial counts differ");
  require_same_shape(a);
  require_same_shape(b);
  if (a.front().rows() != b.front().rows() ||
      a.front().cols() != b.front().cols()) {
    throw DimensionError("trial shapes differ between the two lists");
  }
  std::vector<double> partial(a.size(), 0.0);
  for_each_trial(static_cast<Index>(a.size()), policy,
                 [&](Index g) { partial[g] = (a[g] - b[g]).squaredNorm(); });
  double acc = 0.0;
  for (double p : partial) acc += p;
  return acc;
}

double sq_norm(const std::vector<Matrix>& a, ExecPolicy policy) {
  require_same_shape(a);
  std::vector<double> partial(a.size(), 0.0);
  for_each_trial(static_cast<Index>(a.size()), policy,
                 [&](Index g) { partial[g] = a[g].squaredNorm(); });
  double acc = 0.0;
  for (double p : partial) acc += p;
  return acc;
}

}  // namespace dugh::kernels
