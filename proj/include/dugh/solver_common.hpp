#ifndef DUGH_SOLVER_COMMON_HPP
#define DUGH_SOLVER_COMMON_HPP

#include "dugh/common.hpp"
#include "dugh/kernels.hpp"

/// Configuration shared by all three solvers.
namespace dugh {

struct FitConfig {
  /// Convergence threshold on the relative Frobenius change of the stacked
  /// posterior means between consecutive iterations.
  double epsilon = 1e-8;

  /// Iteration cap.
  int k_max = 1000;

  /// Seed for the random initialization of the variance vector h.
  std::uint64_t seed = 0;

  /// When set, the M noise variances are tied to a single value.
  bool homoscedastic = false;

  /// Execution policy for the per-trial accumulation kernels. Serial and
  /// Parallel produce bitwise-identical results; Serial is the default so
  /// single-threaded runs need no OpenMP runtime.
  kernels::ExecPolicy policy = kernels::ExecPolicy::Serial;

  /// Optional explicit initialization for h (size N + M). Empty means the
  /// default random |N(0,1)| draw. Used by scale-consistency tests and by
  /// callers chaining solver runs.
  Vector init_h;

  /// Diagnostic switch: freeze the temporal covariance at identity, turning
  /// fit_full into the baseline solver's code path.
  bool freeze_temporal = false;

  /// Circulant embedding length for the spectral solver; 0 means the default
  /// 2T + 1.
  Index embed_len = 0;
};

}  // namespace dugh

#endif  // DUGH_SOLVER_COMMON_HPP
