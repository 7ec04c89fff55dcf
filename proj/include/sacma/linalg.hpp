#pragma once

#include <vector>

#include "sacma/rng.hpp"

namespace sacma {

using Vec = std::vector<double>;

// --- small vector helpers -------------------------------------------------

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);  // Euclidean norm
bool all_finite(const Vec& a);

// --- dense square matrix ---------------------------------------------------

class Matrix {
 public:
  Matrix() : n_(0) {}
  explicit Matrix(int n, double fill = 0.0) : n_(n), a_(size_t(n) * n, fill) {}

  static Matrix identity(int n);

  int dim() const { return n_; }
  double& at(int i, int j) { return a_[size_t(i) * n_ + j]; }
  double at(int i, int j) const { return a_[size_t(i) * n_ + j]; }

  Vec mul(const Vec& v) const;   // A v
  Vec tmul(const Vec& v) const;  // A' v
  Matrix mul(const Matrix& m) const;
  Matrix transposed() const;

 private:
  int n_;
  std::vector<double> a_;
};

// --- symmetric matrix with write-enforced symmetry --------------------------

// Full dense storage; every mutator writes both triangles, so
// at(i, j) == at(j, i) holds exactly at all times.
class SymMatrix {
 public:
  SymMatrix() : n_(0) {}
  explicit SymMatrix(int n) : n_(n), a_(size_t(n) * n, 0.0) {}

  static SymMatrix identity(int n);

  int dim() const { return n_; }
  double at(int i, int j) const { return a_[size_t(i) * n_ + j]; }

  void set(int i, int j, double v) {
    a_[size_t(i) * n_ + j] = v;
    a_[size_t(j) * n_ + i] = v;
  }

  // this := s * this
  void scale(double s);

  // this := this + coef * v v'
  void rank_one(double coef, const Vec& v);

  Vec mul(const Vec& v) const;
  bool finite() const;

 private:
  int n_;
  std::vector<double> a_;
};

// --- symmetric eigendecomposition -------------------------------------------

// Eigenvalues sorted in descending order.  `d` is clamped from below at
// 1e-14 * d.front() so that every entry is strictly positive; `d_min_raw`
// keeps the smallest eigenvalue before clamping for conditioning checks.
struct EigenDecomposition {
  Matrix B;  // orthonormal eigenvector columns
  Vec d;     // clamped eigenvalues, descending
  double d_min_raw = 0.0;
};

// Cyclic Jacobi iteration; off-diagonal norm tolerance 1e-12 (relative to
// the Frobenius norm of the input), at most 100 sweeps.
// Throws InvalidMatrix on non-finite input.
EigenDecomposition sym_eigen(const SymMatrix& m);

// Vector of `dim` independent standard normals.
Vec gaussian_vector(Rng& rng, int dim);

// Orthogonal matrix from QR (modified Gram-Schmidt, positive diagonal)
// of a Gaussian matrix, i.e. uniformly distributed w.r.t. the Haar measure.
Matrix random_orthogonal(Rng& rng, int dim);

}  // namespace sacma
