#include <doctest.h>

#include <cmath>
#include <vector>

#include "dugh/rng.hpp"
#include "dugh/solver_baseline.hpp"
#include "dugh/solver_full.hpp"
#include "oracles.hpp"

using namespace dugh;

namespace {

SpatialParams params_of(const Vector& gamma, const Vector& lambda) {
  Vector h(gamma.size() + lambda.size());
  h << gamma, lambda;
  return SpatialParams::from_vector(h, gamma.size(), lambda.size());
}

ChampagneState make_state(const SpatialParams& spatial, const LeadField& lead) {
  ChampagneState state;
  state.spatial = spatial;
  state.sigma_y = sigma_y(spatial, lead);
  return state;
}

struct RandomSetup {
  LeadField lead;
  SpatialParams spatial;
  TrialSet trials;
};

RandomSetup random_setup(Index m, Index n, Index t, Index g, Rng& rng) {
  RandomSetup s;
  s.lead = LeadField::from_matrix(rng.normal_matrix(m, n));
  s.spatial = params_of(
      rng.normal_vector(n).cwiseAbs() + Vector::Constant(n, 0.1),
      rng.normal_vector(m).cwiseAbs() + Vector::Constant(m, 0.1));
  std::vector<Matrix> blocks;
  for (Index i = 0; i < g; ++i) blocks.push_back(rng.normal_matrix(m, t));
  s.trials = TrialSet::from_blocks(std::move(blocks));
  return s;
}

}  // namespace

TEST_SUITE("solver_baseline") {

TEST_CASE("update_gamma_champagne scalar chain") {
  const LeadField lead = LeadField::from_matrix(Matrix::Ones(1, 1));
  const SpatialParams p = params_of(Vector::Ones(1), Vector::Ones(1));
  const ChampagneState state = make_state(p, lead);
  // Sigma_y = 2; xbar = gamma L / Sigma_y * y = 1; numerator = mean 1;
  // denominator = L^T Sigma^{-1} L = 1/2 -> gamma = sqrt(2).
  std::vector<Matrix> two{Matrix::Constant(1, 1, 2.0)};
  const Vector gamma = update_gamma_champagne(
      state, lead, TrialSet::from_blocks(std::move(two)));
  CHECK(gamma[0] == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("update_gamma_champagne floors on zero posterior") {
  Rng rng(71);
  const RandomSetup s = random_setup(3, 5, 4, 2, rng);
  const ChampagneState state = make_state(s.spatial, s.lead);
  std::vector<Matrix> zeros{Matrix::Zero(3, 4), Matrix::Zero(3, 4)};
  const Vector gamma = update_gamma_champagne(
      state, s.lead, TrialSet::from_blocks(std::move(zeros)));
  CHECK((gamma - Vector::Constant(5, k_h_min)).norm() == 0.0);
}

TEST_CASE("update_lambda_hetero scalar chain and perfect-fit floor") {
  const LeadField lead = LeadField::from_matrix(Matrix::Ones(1, 1));
  const SpatialParams p = params_of(Vector::Ones(1), Vector::Ones(1));
  const ChampagneState state = make_state(p, lead);
  // ebar = y - L xbar = 2 - 1 = 1; [(Sigma_y)^{-1}]_11 = 1/2 -> sqrt(2).
  std::vector<Matrix> two{Matrix::Constant(1, 1, 2.0)};
  const TrialSet trials = TrialSet::from_blocks(std::move(two));
  const Vector verbatim = update_lambda_hetero(state, lead, trials);
  CHECK(verbatim[0] == doctest::Approx(std::sqrt(2.0)));
  // T = 1 so both normalizations agree here.
  const Vector normalized = update_lambda_hetero(state, lead, trials,
                                                 LambdaVariant::Normalized);
  CHECK(normalized[0] == doctest::Approx(std::sqrt(2.0)));

  // Perfect fit: with lambda ~ 0 and L = I the residual vanishes.
  const SpatialParams sharp = params_of(Vector::Ones(1), Vector::Zero(1));
  const ChampagneState tight = make_state(sharp, lead);
  const Vector floored = update_lambda_hetero(tight, lead, trials);
  CHECK(floored[0] <= 10.0 * k_h_min);  // residual is O(h_min), near the floor
}

TEST_CASE("verbatim lambda is sqrt(T) times the normalized variant") {
  Rng rng(72);
  const RandomSetup s = random_setup(4, 6, 5, 3, rng);
  const ChampagneState state = make_state(s.spatial, s.lead);
  const Vector verbatim = update_lambda_hetero(state, s.lead, s.trials);
  const Vector normalized = update_lambda_hetero(state, s.lead, s.trials,
                                                 LambdaVariant::Normalized);
  const double root_t = std::sqrt(5.0);
  CHECK((verbatim - root_t * normalized).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("updates equal the index restrictions of update_spatial") {
  Rng rng(73);
  for (int rep = 0; rep < 5; ++rep) {
    const RandomSetup s = random_setup(4, 7, 5, 2, rng);
    const AugmentedDesign aug = AugmentedDesign::from_lead(s.lead);
    const ChampagneState state = make_state(s.spatial, s.lead);

    FullDughState full;
    full.spatial = s.spatial;
    full.b = Matrix::Identity(5, 5);
    full.sigma_y = state.sigma_y;
    const Matrix msp = m_space(s.trials, full.b);
    const Vector g = m_sn_diag(full, aug, msp);
    const SpatialParams joint = update_spatial(full, aug, g, false);

    const Vector gamma = update_gamma_champagne(state, s.lead, s.trials);
    CHECK((gamma - joint.gamma()).cwiseAbs().maxCoeff() < 1e-10);

    const Vector lambda = update_lambda_hetero(state, s.lead, s.trials,
                                               LambdaVariant::Normalized);
    CHECK((lambda - joint.lambda()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("fit_champagne equals fit_full with the temporal model frozen") {
  Rng rng(74);
  const RandomSetup s = random_setup(4, 8, 5, 2, rng);
  FitConfig config;
  config.k_max = 15;
  config.seed = 99;
  const FitResult baseline = fit_champagne(s.lead, s.trials, config);

  FitConfig frozen = config;
  frozen.freeze_temporal = true;
  const FitResult full = fit_full(s.lead, s.trials, frozen);

  REQUIRE(baseline.posterior_means.size() == full.posterior_means.size());
  CHECK((baseline.spatial.h - full.spatial.h).cwiseAbs().maxCoeff() <= 1e-10);
  for (std::size_t i = 0; i < baseline.posterior_means.size(); ++i) {
    CHECK((baseline.posterior_means[i] - full.posterior_means[i]).norm() <=
          1e-10);
  }
  REQUIRE(baseline.nll_trace.size() == full.nll_trace.size());
  for (std::size_t k = 0; k < baseline.nll_trace.size(); ++k) {
    CHECK(baseline.nll_trace[k] == doctest::Approx(full.nll_trace[k])
                                       .epsilon(1e-12));
  }
}

TEST_CASE("fit_champagne floors on zero data, accepts T=1, descends") {
  Rng rng(75);
  const LeadField lead = LeadField::from_matrix(rng.normal_matrix(3, 5));
  SUBCASE("zero data floors") {
    std::vector<Matrix> zeros{Matrix::Zero(3, 4)};
    FitConfig config;
    config.k_max = 4;
    const FitResult result =
        fit_champagne(lead, TrialSet::from_blocks(std::move(zeros)), config);
    CHECK((result.spatial.h - Vector::Constant(8, k_h_min)).norm() == 0.0);
  }
  SUBCASE("T=1 accepted") {
    std::vector<Matrix> skinny{rng.normal_matrix(3, 1),
                               rng.normal_matrix(3, 1)};
    FitConfig config;
    config.k_max = 10;
    const FitResult result =
        fit_champagne(lead, TrialSet::from_blocks(std::move(skinny)), config);
    CHECK(result.iterations >= 1);
  }
  SUBCASE("NLL monotone") {
    std::vector<Matrix> blocks;
    for (int g = 0; g < 3; ++g) blocks.push_back(rng.normal_matrix(3, 6));
    FitConfig config;
    config.k_max = 30;
    config.seed = 5;
    const FitResult result =
        fit_champagne(lead, TrialSet::from_blocks(std::move(blocks)), config);
    for (std::size_t k = 1; k < result.nll_trace.size(); ++k) {
      CHECK(result.nll_trace[k] <= result.nll_trace[k - 1] + 1e-8);
    }
  }
}

}  // TEST_SUITE
