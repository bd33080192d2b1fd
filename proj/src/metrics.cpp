#include "dugh/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace dugh::metrics {

SourcePowerMap SourcePowerMap::make(Matrix positions, Vector weights) {
  if (positions.rows() != weights.size()) {
    throw DimensionError("one weight per position required");
  }
  if (positions.rows() < 1 || positions.cols() < 1) {
    throw ValidationError("positions must be non-empty");
  }
  if (!weights.allFinite() || (weights.array() < 0.0).any()) {
    throw ValidationError("weights must be finite and nonnegative");
  }
  const double total = weights.sum();
  if (total <= 0.0) throw ValidationError("weights must not be all zero");
  SourcePowerMap map;
  map.positions = std::move(positions);
  map.weights = weights / total;
  return map;
}

SourcePowerMap SourcePowerMap::from_sources(Matrix positions,
                                            const Matrix& sources) {
  if (positions.rows() != sources.rows()) {
    throw DimensionError("one position per source row required");
  }
  return make(std::move(positions), sources.rowwise().norm());
}

namespace {

/// Transportation-simplex (MODI) solver on a dense bipartite instance.
/// Supplies receive a tiny index-graded perturbation (balanced into the last
/// demand) so the starting basis is non-degenerate and every pivot strictly
/// improves, guaranteeing termination without anti-cycling machinery.
class TransportSimplex {
 public:
  TransportSimplex(Vector supply, Vector demand, const Matrix& cost)
      : cost_(cost),
        n_rows_(supply.size()),
        n_cols_(demand.size()) {
    constexpr double k_delta = 1e-12;
    double extra = 0.0;
    for (Index i = 0; i < n_rows_; ++i) {
      const double bump = k_delta * static_cast<double>(i + 1);
      supply[i] += bump;
      extra += bump;
    }
    demand[n_cols_ - 1] += extra;
    supply_ = std::move(supply);
    demand_ = std::move(demand);
  }

  void solve() {
    northwest_corner();
    constexpr int k_max_pivots = 200000;
    for (int pivot = 0; pivot < k_max_pivots; ++pivot) {
      compute_potentials();
      Index enter_i = -1;
      Index enter_j = -1;
      double most_negative = -1e-14;
      for (Index i = 0; i < n_rows_; ++i) {
        for (Index j = 0; j < n_cols_; ++j) {
          if (basic_(i, j)) continue;
          const double reduced = cost_(i, j) - u_[i] - v_[j];
          if (reduced < most_negative) {
            most_negative = reduced;
            enter_i = i;
            enter_j = j;
          }
        }
      }
      if (enter_i < 0) return;  // optimal
      pivot_on(enter_i, enter_j);
    }
    throw NumericalError("transport solver failed to converge");
  }

  double objective() const {
    return (flow_.array() * cost_.array()).sum();
  }
  const Matrix& flow() const { return flow_; }
  const Vector& row_potentials() const { return u_; }
  const Vector& col_potentials() const { return v_; }

 private:
  void northwest_corner() {
    flow_ = Matrix::Zero(n_rows_, n_cols_);
    basic_ = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(
        n_rows_, n_cols_, false);
    Vector s = supply_;
    Vector d = demand_;
    Index i = 0;
    Index j = 0;
    while (i < n_rows_ && j < n_cols_) {
      const double moved = std::min(s[i], d[j]);
      flow_(i, j) = moved;
      basic_(i, j) = true;
      s[i] -= moved;
      d[j] -= moved;
      // Advance along the exhausted side, but keep the staircase walking all
      // the way to the bottom-right cell so the basis always holds exactly
      // n_rows + n_cols - 1 cells even under rounding imbalance.
      if (i == n_rows_ - 1 && j < n_cols_ - 1) {
        ++j;
      } else if (j == n_cols_ - 1 && i < n_rows_ - 1) {
        ++i;
      } else if (s[i] <= d[j]) {
        ++i;
      } else {
        ++j;
      }
    }
  }

  /// Solves u_i + v_j = c_ij over the basic spanning tree (u_0 = 0).
  void compute_potentials() {
    u_ = Vector::Constant(n_rows_, std::numeric_limits<double>::quiet_NaN());
    v_ = Vector::Constant(n_cols_, std::numeric_limits<double>::quiet_NaN());
    u_[0] = 0.0;
    // Breadth-first propagation across basic cells.
    std::vector<Index> row_queue = {0};
    std::vector<Index> col_queue;
    while (!row_queue.empty() || !col_queue.empty()) {
      if (!row_queue.empty()) {
        const Index i = row_queue.back();
        row_queue.pop_back();
        for (Index j = 0; j < n_cols_; ++j) {
          if (basic_(i, j) && std::isnan(v_[j])) {
            v_[j] = cost_(i, j) - u_[i];
            col_queue.push_back(j);
          }
        }
      } else {
        const Index j = col_queue.back();
        col_queue.pop_back();
        for (Index i = 0; i < n_rows_; ++i) {
          if (basic_(i, j) && std::isnan(u_[i])) {
            u_[i] = cost_(i, j) - v_[j];
            row_queue.push_back(i);
          }
        }
      }
    }
    if (u_.hasNaN() || v_.hasNaN()) {
      throw NumericalError("transport basis is not connected");
    }
  }

  /// Finds the unique alternating cycle the entering cell closes in the
  /// basis tree and shifts flow around it.
  void pivot_on(Index enter_i, Index enter_j) {
    // Unique path from row node enter_i to column node enter_j through basic
    // cells, found by depth-first search over the bipartite tree.
    std::vector<std::pair<Index, Index>> path;
    if (!find_path(enter_i, enter_j, -1, true, path)) {
      throw NumericalError("transport basis lost its spanning tree");
    }
    // Cycle: entering cell (+), then alternating (-, +, ...) along the path.
    double theta = std::numeric_limits<double>::infinity();
    Index leave_i = -1;
    Index leave_j = -1;
    for (std::size_t k = 0; k < path.size(); k += 2) {
      const auto [i, j] = path[k];
      if (flow_(i, j) < theta) {
        theta = flow_(i, j);
        leave_i = i;
        leave_j = j;
      }
    }
    flow_(enter_i, enter_j) += theta;
    basic_(enter_i, enter_j) = true;
    for (std::size_t k = 0; k < path.size(); ++k) {
      const auto [i, j] = path[k];
      flow_(i, j) += (k % 2 == 0) ? -theta : theta;
    }
    basic_(leave_i, leave_j) = false;
    flow_(leave_i, leave_j) = 0.0;
  }

  /// DFS for the basic-cell path from row node `row` to column node
  /// `target_col`. `from_row` alternates sides; `exclude` skips the edge we
  /// arrived on. Path is returned as the sequence of basic cells, starting
  /// with the one leaving `row` (a "minus" position in the cycle).
  bool find_path(Index node, Index target_col, Index exclude, bool from_row,
                 std::vector<std::pair<Index, Index>>& path) {
    if (from_row) {
      for (Index j = 0; j < n_cols_; ++j) {
        if (!basic_(node, j) || j == exclude) continue;
        path.emplace_back(node, j);
        if (j == target_col) return true;
        if (find_path(j, target_col, node, false, path)) return true;
        path.pop_back();
      }
    } else {
      for (Index i = 0; i < n_rows_; ++i) {
        if (!basic_(i, node) || i == exclude) continue;
        path.emplace_back(i, node);
        if (find_path(i, target_col, node, true, path)) return true;
        path.pop_back();
      }
    }
    return false;
  }

  Matrix cost_;
  Index n_rows_;
  Index n_cols_;
  Vector supply_;
  Vector demand_;
  Matrix flow_;
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> basic_;
  Vector u_;
  Vector v_;
};

void require_same_positions(const SourcePowerMap& a, const SourcePowerMap& b) {
  if (a.positions.rows() != b.positions.rows() ||
      a.positions.cols() != b.positions.cols() ||
      (a.positions - b.positions).cwiseAbs().maxCoeff() != 0.0) {
    throw ValidationError("power maps must share one position set");
  }
}

double max_pairwise_distance(const Matrix& positions) {
  double best = 0.0;
  for (Index i = 0; i < positions.rows(); ++i) {
    for (Index j = i + 1; j < positions.rows(); ++j) {
      best = std::max(best,
                      (positions.row(i) - positions.row(j)).norm());
    }
  }
  return best;
}

}  // namespace

TransportSolution emd_detailed(const SourcePowerMap& a,
                               const SourcePowerMap& b) {
  require_same_positions(a, b);
  const double scale = max_pairwise_distance(a.positions);

  // Restrict to the supports; zero-weight points neither supply nor demand.
  std::vector<Index> rows;
  std::vector<Index> cols;
  for (Index i = 0; i < a.weights.size(); ++i) {
    if (a.weights[i] > 0.0) rows.push_back(i);
  }
  for (Index j = 0; j < b.weights.size(); ++j) {
    if (b.weights[j] > 0.0) cols.push_back(j);
  }

  TransportSolution solution;
  if (scale <= 0.0) {
    // All positions coincide: any plan costs nothing.
    solution.plan = Matrix::Zero(rows.size(), cols.size());
    solution.ground_cost = Matrix::Zero(rows.size(), cols.size());
    solution.row_potentials = Vector::Zero(rows.size());
    solution.col_potentials = Vector::Zero(cols.size());
    return solution;
  }

  Vector supply(rows.size());
  Vector demand(cols.size());
  Matrix cost(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    supply[i] = a.weights[rows[i]];
    for (std::size_t j = 0; j < cols.size(); ++j) {
      cost(i, j) =
          (a.positions.row(rows[i]) - b.positions.row(cols[j])).norm() /
          scale;
    }
  }
  for (std::size_t j = 0; j < cols.size(); ++j) {
    demand[j] = b.weights[cols[j]];
  }

  TransportSimplex simplex(std::move(supply), std::move(demand), cost);
  simplex.solve();
  solution.cost = simplex.objective();
  solution.plan = simplex.flow();
  solution.row_potentials = simplex.row_potentials();
  solution.col_potentials = simplex.col_potentials();
  solution.ground_cost = std::move(cost);
  return solution;
}

double emd(const SourcePowerMap& a, const SourcePowerMap& b) {
  return emd_detailed(a, b).cost;
}

namespace {

/// Pearson correlation of two equal-length rows; NaN when either is
/// (numerically) constant.
double pearson(const Eigen::RowVectorXd& x, const Eigen::RowVectorXd& y) {
  const double mx = x.mean();
  const double my = y.mean();
  const Eigen::RowVectorXd cx = x.array() - mx;
  const Eigen::RowVectorXd cy = y.array() - my;
  const double sx = cx.norm();
  const double sy = cy.norm();
  if (sx <= 0.0 || sy <= 0.0) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return cx.dot(cy) / (sx * sy);
}

}  // namespace

double tce(const Matrix& true_sources, const Matrix& estimated,
           bool exclusive) {
  if (true_sources.cols() != estimated.cols()) {
    throw DimensionError("time axes must match");
  }
  if (true_sources.rows() < 1 || estimated.rows() < 1) {
    throw ValidationError("both source sets must be non-empty");
  }
  std::vector<bool> used(estimated.rows(), false);
  double total = 0.0;
  Index matched = 0;
  for (Index n = 0; n < true_sources.rows(); ++n) {
    double best = -1.0;
    Index best_row = -1;
    for (Index e = 0; e < estimated.rows(); ++e) {
      if (exclusive && used[e]) continue;
      const double corr =
          pearson(true_sources.row(n), estimated.row(e));
      if (std::isnan(corr)) continue;  // zero-variance estimated row
      if (std::abs(corr) > best) {
        best = std::abs(corr);
        best_row = e;
      }
    }
    if (best_row < 0) continue;  // constant true row, or no candidates left
    if (exclusive) used[best_row] = true;
    total += best;
    ++matched;
  }
  if (matched == 0) return 1.0;
  return 1.0 - total / static_cast<double>(matched);
}

double nmse(const Matrix& b_true, const Matrix& b_est) {
  if (b_true.rows() != b_est.rows() || b_true.cols() != b_est.cols()) {
    throw DimensionError("shapes must match");
  }
  const double denom = b_true.squaredNorm();
  if (denom <= 0.0) throw ValidationError("reference matrix must be nonzero");
  return (b_est - b_true).squaredNorm() / denom;
}

double similarity_error(const Matrix& b_true, const Matrix& b_est) {
  if (b_true.rows() != b_est.rows() || b_true.cols() != b_est.cols()) {
    throw DimensionError("shapes must match");
  }
  const Eigen::Map<const Vector> x(b_true.data(), b_true.size());
  const Eigen::Map<const Vector> y(b_est.data(), b_est.size());
  const Vector cx = x.array() - x.mean();
  const Vector cy = y.array() - y.mean();
  const double sx = cx.norm();
  const double sy = cy.norm();
  if (sx <= 0.0 || sy <= 0.0) {
    throw ValidationError("constant matrices have no correlation");
  }
  return 1.0 - cx.dot(cy) / (sx * sy);
}

}  // namespace dugh::metrics
