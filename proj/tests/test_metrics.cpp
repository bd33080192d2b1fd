#include <doctest.h>

#include <cmath>
#include <numeric>
#include <vector>

#include "dugh/metrics.hpp"
#include "dugh/rng.hpp"
#include "oracles.hpp"

using namespace dugh;
using namespace dugh::metrics;

namespace {

/// Positions 0, 1, ..., k-1 on the real line (k x 1).
Matrix line_positions(Index k) {
  Matrix positions(k, 1);
  for (Index i = 0; i < k; ++i) positions(i, 0) = static_cast<double>(i);
  return positions;
}

Vector to_weights(const std::vector<int>& w) {
  Vector out(static_cast<Index>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[i];
  return out;
}

double max_pairwise(const Matrix& positions) {
  double best = 0.0;
  for (Index i = 0; i < positions.rows(); ++i) {
    for (Index j = i + 1; j < positions.rows(); ++j) {
      best = std::max(best, (positions.row(i) - positions.row(j)).norm());
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("SourcePowerMap construction") {
  const Matrix positions = line_positions(3);
  SUBCASE("weights are normalized to unit total") {
    const auto map = SourcePowerMap::make(positions, to_weights({1, 1, 2}));
    CHECK(map.weights.sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(map.weights[2] == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("from_sources uses row l2 norms") {
    Matrix sources(3, 2);
    sources << 3.0, 4.0, 0.0, 0.0, 1.0, 0.0;
    const auto map = SourcePowerMap::from_sources(positions, sources);
    CHECK(map.weights[0] == doctest::Approx(5.0 / 6.0).epsilon(1e-14));
    CHECK(map.weights[1] == 0.0);
    CHECK(map.weights[2] == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  }
  SUBCASE("invalid inputs rejected") {
    CHECK_THROWS_AS(SourcePowerMap::make(positions, to_weights({1, 1})),
                    DimensionError);
    CHECK_THROWS_AS(SourcePowerMap::make(positions, to_weights({1, -1, 1})),
                    ValidationError);
    CHECK_THROWS_AS(SourcePowerMap::make(positions, to_weights({0, 0, 0})),
                    ValidationError);
  }
}

TEST_CASE("emd agrees on hand values") {
  SUBCASE("identical maps cost zero") {
    Rng rng(120);
    const Matrix positions = rng.normal_matrix(5, 3);
    const Vector weights = rng.normal_vector(5).cwiseAbs();
    const auto a = SourcePowerMap::make(positions, weights);
    // Zero up to the solver's anti-degeneracy supply perturbation (1e-12).
    CHECK(emd(a, a) < 1e-9);
  }
  SUBCASE("all mass moved across the diameter costs one") {
    const Matrix positions = line_positions(2);
    const auto a = SourcePowerMap::make(positions, to_weights({1, 0}));
    const auto b = SourcePowerMap::make(positions, to_weights({0, 1}));
    CHECK(emd(a, b) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("three-point split") {
    // Supply (2, 0, 0), demand (0, 1, 1) on 0-1-2: move 1/2 one step and
    // 1/2 two steps; diameter 2 => cost = (1/2 * 1 + 1/2 * 2) / 2 = 0.75.
    const Matrix positions = line_positions(3);
    const auto a = SourcePowerMap::make(positions, to_weights({2, 0, 0}));
    const auto b = SourcePowerMap::make(positions, to_weights({0, 1, 1}));
    CHECK(emd(a, b) == doctest::Approx(0.75).epsilon(1e-10));
  }
  SUBCASE("mismatched position sets rejected") {
    const auto a = SourcePowerMap::make(line_positions(2), to_weights({1, 1}));
    const auto b =
        SourcePowerMap::make(2.0 * line_positions(2), to_weights({1, 1}));
    CHECK_THROWS_AS(emd(a, b), ValidationError);
  }
}

TEST_CASE("emd matches the brute-force transport optimum") {
  Rng rng(121);
  for (int rep = 0; rep < 10; ++rep) {
    const Index k = 2 + static_cast<Index>(rng.below(3));  // 2..4 points
    const Matrix positions = rng.normal_matrix(k, 2);
    std::vector<int> supply(static_cast<std::size_t>(k));
    std::vector<int> demand(static_cast<std::size_t>(k));
    int total_s = 0;
    int total_d = 0;
    for (Index i = 0; i < k; ++i) {
      supply[i] = 1 + static_cast<int>(rng.below(5));
      demand[i] = 1 + static_cast<int>(rng.below(5));
      total_s += supply[i];
      total_d += demand[i];
    }
    demand.back() += total_s - total_d;
    if (demand.back() < 1) {
      supply.back() += 1 - demand.back();
      total_s += 1 - demand.back();
      demand.back() = 1;
    }
    const int total = std::accumulate(supply.begin(), supply.end(), 0);

    const double scale = max_pairwise(positions);
    Matrix cost(k, k);
    for (Index i = 0; i < k; ++i) {
      for (Index j = 0; j < k; ++j) {
        cost(i, j) = (positions.row(i) - positions.row(j)).norm() / scale;
      }
    }
    const double brute =
        oracle::emd_bruteforce(supply, demand, cost) / total;

    const auto a = SourcePowerMap::make(positions, to_weights(supply));
    const auto b = SourcePowerMap::make(positions, to_weights(demand));
    CHECK(std::abs(emd(a, b) - brute) < 1e-9);
  }
}

TEST_CASE("emd is a metric on a shared position set") {
  Rng rng(122);
  const Matrix positions = rng.normal_matrix(5, 2);
  for (int rep = 0; rep < 20; ++rep) {
    const auto draw = [&]() {
      Vector w(5);
      for (Index i = 0; i < 5; ++i) w[i] = 0.05 + rng.uniform01();
      return SourcePowerMap::make(positions, w);
    };
    const auto a = draw();
    const auto b = draw();
    const auto c = draw();
    const double ab = emd(a, b);
    const double bc = emd(b, c);
    const double ac = emd(a, c);
    CHECK(ac <= ab + bc + 1e-9);            // triangle inequality
    CHECK(std::abs(ab - emd(b, a)) < 1e-9);  // symmetry
    CHECK(ab >= -1e-12);
  }
}

TEST_CASE("emd is invariant to a joint relabeling of the points") {
  Rng rng(123);
  const Matrix positions = rng.normal_matrix(6, 2);
  Vector wa(6), wb(6);
  for (Index i = 0; i < 6; ++i) {
    wa[i] = 0.1 + rng.uniform01();
    wb[i] = 0.1 + rng.uniform01();
  }
  const double base = emd(SourcePowerMap::make(positions, wa),
                          SourcePowerMap::make(positions, wb));

  std::vector<Index> perm = {3, 0, 5, 1, 4, 2};
  Matrix pos_p(6, 2);
  Vector wa_p(6), wb_p(6);
  for (Index i = 0; i < 6; ++i) {
    pos_p.row(i) = positions.row(perm[i]);
    wa_p[i] = wa[perm[i]];
    wb_p[i] = wb[perm[i]];
  }
  const double permuted = emd(SourcePowerMap::make(pos_p, wa_p),
                              SourcePowerMap::make(pos_p, wb_p));
  CHECK(std::abs(base - permuted) < 1e-9);
}

TEST_CASE("emd_detailed returns an optimality certificate") {
  Rng rng(124);
  for (int rep = 0; rep < 5; ++rep) {
    const Matrix positions = rng.normal_matrix(4, 2);
    Vector wa(4), wb(4);
    for (Index i = 0; i < 4; ++i) {
      wa[i] = 0.1 + rng.uniform01();
      wb[i] = 0.1 + rng.uniform01();
    }
    const auto a = SourcePowerMap::make(positions, wa);
    const auto b = SourcePowerMap::make(positions, wb);
    const TransportSolution sol = emd_detailed(a, b);

    // Plan margins reproduce the (normalized) weights.
    for (Index i = 0; i < 4; ++i) {
      CHECK(std::abs(sol.plan.row(i).sum() - a.weights[i]) < 1e-9);
      CHECK(std::abs(sol.plan.col(i).sum() - b.weights[i]) < 1e-9);
      CHECK(sol.plan.row(i).minCoeff() >= -1e-12);
    }
    // LP duality: feasible potentials, tight on the support, and the dual
    // objective meets the primal cost - together these certify optimality.
    double dual = 0.0;
    for (Index i = 0; i < 4; ++i) {
      dual += sol.row_potentials[i] * a.weights[i] +
              sol.col_potentials[i] * b.weights[i];
      for (Index j = 0; j < 4; ++j) {
        const double slack = sol.ground_cost(i, j) - sol.row_potentials[i] -
                             sol.col_potentials[j];
        CHECK(slack >= -1e-9);
        if (sol.plan(i, j) > 1e-9) CHECK(std::abs(slack) < 1e-9);
      }
    }
    CHECK(std::abs(dual - sol.cost) < 1e-9);
  }
}

TEST_CASE("tce known values") {
  Rng rng(125);
  const Matrix x = rng.normal_matrix(4, 16);
  SUBCASE("estimate equal to the truth scores zero") {
    CHECK(tce(x, x) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("sign flips do not matter") {
    CHECK(tce(x, Matrix(-x)) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("orthogonal estimate scores one") {
    Matrix truth(1, 4);
    truth << 1.0, 0.0, -1.0, 0.0;
    Matrix est(1, 4);
    est << 0.0, 1.0, 0.0, -1.0;
    CHECK(tce(truth, est) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("exclusive matching consumes rows") {
    Matrix truth(2, 4);
    truth << 1.0, 0.0, -1.0, 0.0, 1.0, 0.0, -1.0, 0.0;
    Matrix est(2, 4);
    est << 1.0, 0.0, -1.0, 0.0, 0.0, 1.0, 0.0, -1.0;
    CHECK(tce(truth, est, /*exclusive=*/false) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(tce(truth, est, /*exclusive=*/true) ==
          doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("row order of the estimate is irrelevant") {
    Matrix shuffled(4, 16);
    shuffled << x.row(2), x.row(0), x.row(3), x.row(1);
    CHECK(tce(x, shuffled) == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("time axes must match") {
    CHECK_THROWS_AS(tce(x, rng.normal_matrix(4, 8)), DimensionError);
  }
}

TEST_CASE("nmse known values") {
  Rng rng(126);
  const Matrix b = oracle::random_spd(4, rng);
  CHECK(nmse(b, b) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(nmse(b, Matrix(2.0 * b)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(nmse(b, Matrix::Zero(3, 3)), DimensionError);
  CHECK_THROWS_AS(nmse(Matrix::Zero(4, 4), b), ValidationError);
}

TEST_CASE("similarity_error known values and affine invariance") {
  Rng rng(127);
  const Matrix b = oracle::random_spd(4, rng);
  CHECK(similarity_error(b, b) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(similarity_error(b, Matrix(2.0 * b)) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(similarity_error(b, Matrix(-b)) ==
        doctest::Approx(2.0).epsilon(1e-12));
  // Positive rescaling plus a constant shift leaves the correlation intact.
  const Matrix shifted = 3.5 * b + Matrix::Constant(4, 4, 1.25);
  CHECK(similarity_error(b, shifted) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(similarity_error(b, Matrix::Constant(4, 4, 2.0)),
                  ValidationError);
}

}  // TEST_SUITE
