#include "sacma/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sacma/errors.hpp"

namespace sacma {

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

bool all_finite(const Vec& a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

Matrix Matrix::identity(int n) {
  Matrix m(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

Vec Matrix::mul(const Vec& v) const {
  Vec r(n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    const double* row = &a_[size_t(i) * n_];
    double s = 0.0;
    for (int j = 0; j < n_; ++j) s += row[j] * v[j];
    r[i] = s;
  }
  return r;
}

Vec Matrix::tmul(const Vec& v) const {
  Vec r(n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    const double* row = &a_[size_t(i) * n_];
    const double vi = v[i];
    for (int j = 0; j < n_; ++j) r[j] += row[j] * vi;
  }
  return r;
}

Matrix Matrix::mul(const Matrix& m) const {
  Matrix r(n_);
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k) {
      const double aik = at(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < n_; ++j) r.at(i, j) += aik * m.at(k, j);
    }
  return r;
}

Matrix Matrix::transposed() const {
  Matrix r(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) r.at(j, i) = at(i, j);
  return r;
}

SymMatrix SymMatrix::identity(int n) {
  SymMatrix m(n);
  for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
  return m;
}

void SymMatrix::scale(double s) {
  for (double& v : a_) v *= s;
}

void SymMatrix::rank_one(double coef, const Vec& v) {
  for (int i = 0; i < n_; ++i) {
    const double ci = coef * v[i];
    for (int j = 0; j <= i; ++j) {
      const double upd = a_[size_t(i) * n_ + j] + ci * v[j];
      a_[size_t(i) * n_ + j] = upd;
      a_[size_t(j) * n_ + i] = upd;
    }
  }
}

Vec SymMatrix::mul(const Vec& v) const {
  Vec r(n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    const double* row = &a_[size_t(i) * n_];
    double s = 0.0;
    for (int j = 0; j < n_; ++j) s += row[j] * v[j];
    r[i] = s;
  }
  return r;
}

bool SymMatrix::finite() const {
  for (double v : a_)
    if (!std::isfinite(v)) return false;
  return true;
}

namespace {

// Frobenius norm of the strict upper triangle.
double off_diag_norm(const Matrix& a) {
  const int n = a.dim();
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) s += a.at(i, j) * a.at(i, j);
  return std::sqrt(2.0 * s);
}

}  // namespace

EigenDecomposition sym_eigen(const SymMatrix& m) {
  const int n = m.dim();
  if (n <= 0) throw InvalidMatrix("sym_eigen: empty matrix");
  if (!m.finite()) throw InvalidMatrix("sym_eigen: non-finite entries");

  Matrix a(n), v = Matrix::identity(n);
  double frob = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      a.at(i, j) = m.at(i, j);
      frob += m.at(i, j) * m.at(i, j);
    }
  frob = std::sqrt(frob);

  const double tol = 1e-12 * frob;
  const int max_sweeps = 100;

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    if (off_diag_norm(a) <= tol) break;
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a.at(p, q);
        if (apq == 0.0) continue;
        // 2x2 symmetric Schur rotation annihilating a(p, q).
        const double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * apq);
        double t;
        if (theta >= 0.0)
          t = 1.0 / (theta + std::sqrt(theta * theta + 1.0));
        else
          t = -1.0 / (-theta + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        const double app = a.at(p, p), aqq = a.at(q, q);
        a.at(p, p) = app - t * apq;
        a.at(q, q) = aqq + t * apq;
        a.at(p, q) = 0.0;
        a.at(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = a.at(k, p), akq = a.at(k, q);
          a.at(k, p) = c * akp - s * akq;
          a.at(p, k) = a.at(k, p);
          a.at(k, q) = s * akp + c * akq;
          a.at(q, k) = a.at(k, q);
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = v.at(k, p), vkq = v.at(k, q);
          v.at(k, p) = c * vkp - s * vkq;
          v.at(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  // Sort eigenpairs by descending eigenvalue.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Vec diag(n);
  for (int i = 0; i < n; ++i) diag[i] = a.at(i, i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return diag[x] > diag[y]; });

  EigenDecomposition e;
  e.B = Matrix(n);
  e.d.resize(n);
  for (int j = 0; j < n; ++j) {
    e.d[j] = diag[order[j]];
    for (int i = 0; i < n; ++i) e.B.at(i, j) = v.at(i, order[j]);
  }
  e.d_min_raw = e.d[n - 1];

  // Clamp tiny/negative eigenvalues so inverse square roots stay finite.
  double floor = 1e-14 * e.d[0];
  if (!(floor > 0.0)) floor = 1e-300;
  for (double& x : e.d) x = std::max(x, floor);
  return e;
}

Vec gaussian_vector(Rng& rng, int dim) {
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rng.normal();
  return v;
}

Matrix random_orthogonal(Rng& rng, int dim) {
  Matrix q(dim);
  // Gaussian columns, then modified Gram-Schmidt with one
  // re-orthogonalization pass; R's diagonal is positive by construction,
  // which makes the result Haar-distributed.
  std::vector<Vec> cols(dim);
  for (int j = 0; j < dim; ++j) cols[j] = gaussian_vector(rng, dim);
  for (int j = 0; j < dim; ++j) {
    Vec& u = cols[j];
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < j; ++i) {
        const double proj = dot(cols[i], u);
        for (int k = 0; k < dim; ++k) u[k] -= proj * cols[i][k];
      }
    double nrm = norm2(u);
    while (nrm < 1e-12) {  // essentially impossible; fresh draw keeps going
      u = gaussian_vector(rng, dim);
      for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i < j; ++i) {
          const double proj = dot(cols[i], u);
          for (int k = 0; k < dim; ++k) u[k] -= proj * cols[i][k];
        }
      nrm = norm2(u);
    }
    for (int k = 0; k < dim; ++k) u[k] /= nrm;
  }
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) q.at(i, j) = cols[j][i];
  return q;
}

}  // namespace sacma
