#ifndef DUGH_KERNELS_HPP
#define DUGH_KERNELS_HPP

#include <functional>
#include <vector>

#include "dugh/common.hpp"

/// Per-trial accumulation kernels on the hot path of the solvers.
///
/// Each kernel exists in two execution policies: Serial is the reference
/// implementation, Parallel distributes the independent per-trial work across
/// OpenMP threads. Both compute each trial's partial result with identical
/// arithmetic and store it in a slot indexed by trial, then reduce the slots
/// serially in trial order - so the two policies (and any thread count)
/// produce bitwise-identical results.
namespace dugh::kernels {

enum class ExecPolicy { Serial, Parallel };

/// Number of OpenMP threads the Parallel policy would use (1 when OpenMP is
/// unavailable).
int max_threads();

/// True when the binary was compiled with OpenMP support.
bool has_openmp();

/// Quadratic accumulation in time: (1 / (M G)) sum_g Y_g^T A Y_g for a
/// symmetric M x M weight matrix A (typically an inverse sensor covariance).
/// Result is T x T.
Matrix accum_time(const std::vector<Matrix>& trials, const Matrix& weight,
                  ExecPolicy policy);

/// Quadratic accumulation in space: (1 / (T G)) sum_g Y_g A Y_g^T for a
/// symmetric T x T weight matrix A (typically an inverse temporal
/// covariance). Result is M x M.
Matrix accum_space(const std::vector<Matrix>& trials, const Matrix& weight,
                   ExecPolicy policy);

/// Applies one N x M gain matrix to every trial: out[g] = gain * trials[g].
std::vector<Matrix> apply_gain(const Matrix& gain,
                               const std::vector<Matrix>& trials,
                               ExecPolicy policy);

/// Applies an arbitrary per-trial transform; fn must be safe to call from
/// multiple threads (pure in practice).
std::vector<Matrix> map_trials(const std::vector<Matrix>& trials,
                               const std::function<Matrix(const Matrix&)>& fn,
                               ExecPolicy policy);

/// Squared Frobenius norm of the stacked difference between two trial lists.
double diff_sq_norm(const std::vector<Matrix>& a, const std::vector<Matrix>& b,
                    ExecPolicy policy);

/// Squared Frobenius norm of a stacked trial list.
double sq_norm(const std::vector<Matrix>& a, ExecPolicy policy);

}  // namespace dugh::kernels

#endif  // DUGH_KERNELS_HPP
