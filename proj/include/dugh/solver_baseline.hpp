#ifndef DUGH_SOLVER_BASELINE_HPP
#define DUGH_SOLVER_BASELINE_HPP

#include "dugh/model.hpp"
#include "dugh/solver_common.hpp"

/// Baseline solver (Champagne with heteroscedastic noise learning): the
/// temporally-unstructured comparator. Equivalent to the full solver with the
/// temporal covariance frozen at identity.
namespace dugh {

/// Iteration state: spatial variances and the cached sensor covariance.
struct ChampagneState {
  SpatialParams spatial;
  Matrix sigma_y;
  int iteration = 0;
};

/// Which time normalization the standalone noise update uses. The source
/// update averages the squared posterior means over time; the cited noise
/// update sums them instead. Verbatim keeps that asymmetry; Normalized
/// divides by T, which makes the update the exact noise-index restriction of
/// the full solver's spatial step (the variant the fit loop uses).
enum class LambdaVariant { Verbatim, Normalized };

/// Source-variance update
///   gamma_n = sqrt( (1/(T G)) sum_{g,t} xbar_{n,t,g}^2 /
///                   [L^T Sigma_y^{-1} L]_{nn} ),
/// floored at h_min, with posterior means xbar_g = Gamma L^T Sigma_y^{-1}
/// Y_g. Equals the source-index restriction of update_spatial.
Vector update_gamma_champagne(const ChampagneState& state,
                              const LeadField& lead, const TrialSet& trials);

/// Per-sensor noise-variance update from the posterior residuals
/// ebar_g = Y_g - L xbar_g:
///   lambda_m = sqrt( num_m / [Sigma_y^{-1}]_{mm} ),
/// where num_m = (1/G) sum_{g,t} ebar_{m,t,g}^2 for Verbatim and carries an
/// extra 1/T for Normalized. Floored at h_min.
Vector update_lambda_hetero(const ChampagneState& state, const LeadField& lead,
                            const TrialSet& trials,
                            LambdaVariant variant = LambdaVariant::Verbatim);

/// Runs the baseline solver: the shared fit loop with the temporal model
/// pinned to identity (accepts T = 1). Spatial updates use the normalized
/// restriction form, preserving the monotone-likelihood guarantee.
FitResult fit_champagne(const LeadField& lead, const TrialSet& trials,
                        const FitConfig& config);

}  // namespace dugh

#endif  // DUGH_SOLVER_BASELINE_HPP
