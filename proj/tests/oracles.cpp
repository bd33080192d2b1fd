#include "oracles.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>

namespace oracle {

Matrix kron_ref(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      for (Index k = 0; k < b.rows(); ++k) {
        for (Index l = 0; l < b.cols(); ++l) {
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
        }
      }
    }
  }
  return out;
}

Vector vec_t(const Matrix& x) {
  Vector out(x.rows() * x.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index t = 0; t < x.cols(); ++t) out[i * x.cols() + t] = x(i, t);
  }
  return out;
}

Matrix unvec_t(const Vector& v, Index rows, Index cols) {
  Matrix out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index t = 0; t < cols; ++t) out(i, t) = v[i * cols + t];
  }
  return out;
}

Matrix joint_posterior_mean(const Matrix& lead, const Vector& gamma,
                            const Vector& lambda, const Matrix& b,
                            const Matrix& y) {
  const Index n = lead.cols();
  const Index t = b.rows();
  const Matrix sigma0 = kron_ref(Matrix(gamma.asDiagonal()), b);
  const Matrix sigma_e = kron_ref(Matrix(lambda.asDiagonal()), b);
  const Matrix d = kron_ref(lead, Matrix::Identity(t, t));
  const Matrix prior_inf = sigma0.ldlt().solve(
      Matrix::Identity(sigma0.rows(), sigma0.cols()));
  const Matrix noise_inf = sigma_e.ldlt().solve(
      Matrix::Identity(sigma_e.rows(), sigma_e.cols()));
  const Matrix post_inf = prior_inf + d.transpose() * noise_inf * d;
  const Vector rhs = d.transpose() * (noise_inf * vec_t(y));
  const Vector xbar = post_inf.ldlt().solve(rhs);
  return unvec_t(xbar, n, t);
}

double nll_smv(const Matrix& lead, const Vector& gamma, const Vector& lambda,
               const Matrix& b, const std::vector<Matrix>& trials) {
  const Matrix sigma_y = lead * gamma.asDiagonal() * lead.transpose() +
                         Matrix(lambda.asDiagonal());
  const Matrix big = kron_ref(sigma_y, b);
  const Eigen::LLT<Matrix> llt(big);
  double logdet = 0.0;
  for (Index i = 0; i < big.rows(); ++i) {
    logdet += 2.0 * std::log(llt.matrixL()(i, i));
  }
  double quad = 0.0;
  for (const Matrix& y : trials) {
    const Vector v = vec_t(y);
    quad += v.dot(llt.solve(v));
  }
  return logdet + quad / static_cast<double>(trials.size());
}

double golden_min(const std::function<double(double)>& f, double lo, double hi,
                  double tol) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, d = hi;
  double c = d - phi * (d - a);
  double b = a + phi * (d - a);
  double fc = f(c), fb = f(b);
  while (d - a > tol * (1.0 + std::abs(a) + std::abs(d))) {
    if (fc < fb) {
      d = b;
      b = c;
      fb = fc;
      c = d - phi * (d - a);
      fc = f(c);
    } else {
      a = c;
      c = b;
      fc = fb;
      b = a + phi * (d - a);
      fb = f(b);
    }
  }
  return 0.5 * (a + d);
}

Vector spatial_surrogate_min(const Vector& z, const Vector& g, double h_min) {
  Vector h(z.size());
  for (Index i = 0; i < z.size(); ++i) {
    const double zi = z[i], gi = g[i];
    const auto f = [&](double x) { return zi * x + gi / x; };
    const double hi_bracket =
        std::max(1.0, 10.0 * std::sqrt(std::max(gi, h_min) / zi) + 1.0);
    h[i] = std::max(golden_min(f, h_min, hi_bracket), h_min);
  }
  return h;
}

double temporal_surrogate(const Matrix& b_k, const Matrix& m_time,
                          const Matrix& b) {
  return (b_k.inverse() * b).trace() + (m_time * b.inverse()).trace();
}

namespace {

struct BruteState {
  const Matrix* cost = nullptr;
  const std::vector<int>* supply = nullptr;
  std::vector<int> demand;
  double acc = 0.0;
  double best = std::numeric_limits<double>::infinity();

  void rec_row(std::size_t i) {
    if (i == supply->size()) {
      best = std::min(best, acc);
      return;
    }
    rec_cell(i, 0, (*supply)[i]);
  }

  void rec_cell(std::size_t i, std::size_t j, int rem) {
    if (acc >= best) return;
    if (j + 1 == demand.size()) {
      if (rem <= demand[j]) {
        demand[j] -= rem;
        acc += rem * (*cost)(static_cast<Index>(i), static_cast<Index>(j));
        rec_row(i + 1);
        acc -= rem * (*cost)(static_cast<Index>(i), static_cast<Index>(j));
        demand[j] += rem;
      }
      return;
    }
    const int cap = std::min(rem, demand[j]);
    for (int v = 0; v <= cap; ++v) {
      demand[j] -= v;
      acc += v * (*cost)(static_cast<Index>(i), static_cast<Index>(j));
      rec_cell(i, j + 1, rem - v);
      acc -= v * (*cost)(static_cast<Index>(i), static_cast<Index>(j));
      demand[j] += v;
    }
  }
};

}  // namespace

double emd_bruteforce(const std::vector<int>& supply,
                      const std::vector<int>& demand, const Matrix& cost) {
  BruteState state;
  state.cost = &cost;
  state.supply = &supply;
  state.demand = demand;
  state.rec_row(0);
  return state.best;
}

Vector circulant_embed_row(const Vector& first_row, Index embed_len) {
  const Index t = first_row.size();
  Vector c = Vector::Constant(embed_len, first_row[t - 1]);
  c[0] = first_row[0];
  for (Index j = 1; j < t; ++j) {
    c[j] = first_row[j];
    c[embed_len - j] = first_row[j];
  }
  return c;
}

Matrix circulant_dense(const Vector& first_row) {
  const Index l = first_row.size();
  Matrix out(l, l);
  for (Index i = 0; i < l; ++i) {
    for (Index j = 0; j < l; ++j) out(i, j) = first_row[(j - i + l) % l];
  }
  return out;
}

double ar_max_root(const Vector& coeffs) {
  const Index p = coeffs.size();
  // Transposed companion of z^P - a_1 z^{P-1} - ... - a_P (coefficients down
  // the first column, ones on the superdiagonal); same spectrum as the
  // standard layout.
  Matrix companion = Matrix::Zero(p, p);
  companion.col(0) = coeffs;
  for (Index i = 0; i + 1 < p; ++i) companion(i, i + 1) = 1.0;
  const Eigen::EigenSolver<Matrix> eig(companion);
  double max_mag = 0.0;
  for (Index i = 0; i < p; ++i) {
    max_mag = std::max(max_mag, std::abs(eig.eigenvalues()[i]));
  }
  return max_mag;
}

double pearson(const Vector& x, const Vector& y) {
  const double mx = x.mean(), my = y.mean();
  const Vector cx = x.array() - mx;
  const Vector cy = y.array() - my;
  return cx.dot(cy) / std::sqrt(cx.squaredNorm() * cy.squaredNorm());
}

Matrix random_spd(Index dim, dugh::Rng& rng) {
  const Matrix w = rng.normal_matrix(dim, dim);
  return w * w.transpose() / static_cast<double>(dim) +
         0.5 * Matrix::Identity(dim, dim);
}

}  // namespace oracle
