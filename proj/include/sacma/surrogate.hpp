#pragma once

#include <cstdint>
#include <vector>

#include "sacma/linalg.hpp"

namespace sacma {

// Rank-based surrogate: an RBF ranking SVM in the metric induced by the
// current covariance matrix.  Training fits the n-1 adjacent-rank
// constraints score(x_i) better-than score(x_{i+1}) by margin 1, via dual
// coordinate ascent that always updates the most violated constraint; the
// constraint for rank position i (1-based) has violation cost
// c_base * (n - i)^c_pow, which enforces the top of the ranking hardest.
// The iteration budget is iter_factor * n^2 measured in kernel-matrix
// operations, i.e. iter_factor sweeps of n-1 single-constraint updates;
// ascent stops early once no constraint is violated beyond tolerance.

struct SurrogateHyperParams {
  int n_train = 0;            // training archive size
  double iter_factor = 100.0; // sweep budget for dual ascent
  double c_base = 1e5;        // base constraint violation cost
  double c_pow = 2.0;         // rank-dependence exponent of the cost
  double sigma_factor = 1.0;  // multiplier on the data-derived bandwidth
};

// Legal ranges, derived from dimension and population size:
//   n_train      [lambda + 2, floor(40 + 4 D^1.7)]   linear
//   iter_factor  [10, 1000]                           log-scaled
//   c_base       [1e2, 1e8]                           log-scaled
//   c_pow        [0, 4]                               linear
//   sigma_factor [0.5, 2]                             log-scaled
struct HyperBox {
  int n_lo = 0, n_hi = 0;
  double iter_lo = 10.0, iter_hi = 1000.0;
  double cbase_lo = 1e2, cbase_hi = 1e8;
  double cpow_lo = 0.0, cpow_hi = 4.0;
  double sf_lo = 0.5, sf_hi = 2.0;

  static HyperBox standard(int dim, int lambda);

  // Maps a point of the unit cube onto the box (log axes where noted).
  SurrogateHyperParams from_unit(const double u[5]) const;

  // Inverse of from_unit (clamped to the unit cube).
  void to_unit(const SurrogateHyperParams& hp, double u[5]) const;

  // Mid-box defaults (n_train at the upper bound).
  SurrogateHyperParams defaults() const;

  SurrogateHyperParams clamp(SurrogateHyperParams hp) const;
};

// floor(40 + 4 D^1.7): standard training archive size at dimension D.
int standard_train_size(int dim);

// x -> A x with A = diag(1/sqrt(d)) B' (an inverse square root of C), so
// kernel distances are Mahalanobis distances w.r.t. C.  sigma_k is
// sigma_factor times the mean pairwise distance of the transformed
// training points.
struct KernelTransform {
  Matrix A;
  double sigma_k = 1.0;

  Vec apply(const Vec& x) const { return A.mul(x); }
};

// Throws NotEnoughData for fewer than 2 points, InvalidMatrix for a
// non-finite covariance.
KernelTransform build_transform(const SymMatrix& cov,
                                const std::vector<Vec>& points,
                                double sigma_factor = 1.0);

struct TrainPoint {
  Vec x;
  double f = 0.0;
  std::int64_t seq = 0;  // evaluation recency; larger = newer
};

struct SurrogateModel {
  std::vector<Vec> points;  // transformed training points, best to worst
  Vec train_f;              // their true fitness, ascending
  Vec alpha;                // dual coefficients, one per adjacent pair
  Vec beta;                 // per-point expansion coefficients
  Matrix A;
  double sigma_k = 1.0;
  SurrogateHyperParams hp;
  int dropped_duplicates = 0;
  std::int64_t kernel_ops = 0;  // training cost in kernel-matrix operations

  // Surrogate score; lower is better, matching minimization.
  double predict(const Vec& x) const;
};

// Trains on the given points (sorted internally by fitness).  Duplicate
// coordinates with conflicting fitness are resolved by dropping the older
// point and counting it in dropped_duplicates.  Deterministic: identical
// inputs give identical coefficients.
// Throws NotEnoughData for fewer than 2 distinct points.
SurrogateModel train(std::vector<TrainPoint> pts,
                     const SurrogateHyperParams& hp,
                     const KernelTransform& kt);

// Fraction of discordant pairs between predicted scores and true fitness
// over all m(m-1)/2 pairs; a pair tied on one side but not the other
// counts half.  0 = same ordering, 1 = reversed.
// Throws InvalidSample for fewer than 2 values.
double rank_error_from_scores(const Vec& predicted, const Vec& truth);

// Rank error of a model's predictions on the given points.
double rank_error(const SurrogateModel& model, const std::vector<Vec>& xs,
                  const Vec& fs);

}  // namespace sacma
