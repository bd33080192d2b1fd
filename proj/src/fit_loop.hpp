#ifndef DUGH_FIT_LOOP_HPP
#define DUGH_FIT_LOOP_HPP

#include <vector>

#include "dugh/model.hpp"
#include "dugh/solver_common.hpp"
#include "dugh/solver_thin.hpp"

/// Internal: the one MM fit loop shared by all three solvers. Each solver is
/// a temporal strategy plugged into the same iteration skeleton
/// (posterior -> temporal update -> spatial update -> likelihood bookkeeping),
/// which is what makes the frozen-identity equivalence between the full and
/// baseline solvers exact.
namespace dugh::detail {

enum class TemporalStrategy {
  FullGeodesic,      ///< dense B via geometric-mean steps
  ToeplitzSpectrum,  ///< circulant-embedding spectrum updates
  FrozenIdentity,    ///< B = I throughout (baseline solver)
};

FitResult fit_mm(const LeadField& lead, const TrialSet& trials,
                 const FitConfig& config, TemporalStrategy strategy);

/// Batched efficient posterior means (one plan shared by all trials).
std::vector<Matrix> efficient_posterior_means(
    const SpatialParams& spatial, const Vector& p, const CirculantBasis& basis,
    const LeadField& lead, const std::vector<Matrix>& trials,
    kernels::ExecPolicy policy);

}  // namespace dugh::detail

#endif  // DUGH_FIT_LOOP_HPP
