#include "sacma/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sacma/errors.hpp"

namespace sacma {

int standard_train_size(int dim) {
  return int(std::floor(40.0 + 4.0 * std::pow(double(dim), 1.7)));
}

HyperBox HyperBox::standard(int dim, int lambda) {
  HyperBox b;
  b.n_lo = lambda + 2;
  b.n_hi = std::max(b.n_lo, standard_train_size(dim));
  return b;
}

SurrogateHyperParams HyperBox::from_unit(const double u[5]) const {
  SurrogateHyperParams hp;
  hp.n_train = n_lo + int(std::lround(u[0] * double(n_hi - n_lo)));
  hp.iter_factor = std::exp(std::log(iter_lo) +
                            u[1] * (std::log(iter_hi) - std::log(iter_lo)));
  hp.c_base = std::exp(std::log(cbase_lo) +
                       u[2] * (std::log(cbase_hi) - std::log(cbase_lo)));
  hp.c_pow = cpow_lo + u[3] * (cpow_hi - cpow_lo);
  hp.sigma_factor =
      std::exp(std::log(sf_lo) + u[4] * (std::log(sf_hi) - std::log(sf_lo)));
  return clamp(hp);
}

void HyperBox::to_unit(const SurrogateHyperParams& hp, double u[5]) const {
  auto lin = [](double v, double lo, double hi) {
    return hi > lo ? std::clamp((v - lo) / (hi - lo), 0.0, 1.0) : 0.5;
  };
  auto logu = [&](double v, double lo, double hi) {
    return lin(std::log(v), std::log(lo), std::log(hi));
  };
  u[0] = lin(hp.n_train, n_lo, n_hi);
  u[1] = logu(hp.iter_factor, iter_lo, iter_hi);
  u[2] = logu(hp.c_base, cbase_lo, cbase_hi);
  u[3] = lin(hp.c_pow, cpow_lo, cpow_hi);
  u[4] = logu(hp.sigma_factor, sf_lo, sf_hi);
}

SurrogateHyperParams HyperBox::defaults() const {
  SurrogateHyperParams hp;
  hp.n_train = n_hi;
  hp.iter_factor = std::sqrt(iter_lo * iter_hi);
  hp.c_base = std::sqrt(cbase_lo * cbase_hi);
  hp.c_pow = 0.5 * (cpow_lo + cpow_hi);
  hp.sigma_factor = 1.0;
  return hp;
}

SurrogateHyperParams HyperBox::clamp(SurrogateHyperParams hp) const {
  hp.n_train = std::clamp(hp.n_train, n_lo, n_hi);
  hp.iter_factor = std::clamp(hp.iter_factor, iter_lo, iter_hi);
  hp.c_base = std::clamp(hp.c_base, cbase_lo, cbase_hi);
  hp.c_pow = std::clamp(hp.c_pow, cpow_lo, cpow_hi);
  hp.sigma_factor = std::clamp(hp.sigma_factor, sf_lo, sf_hi);
  return hp;
}

KernelTransform build_transform(const SymMatrix& cov,
                                const std::vector<Vec>& points,
                                double sigma_factor) {
  if (points.size() < 2)
    throw NotEnoughData("build_transform: need at least 2 points");
  if (!cov.finite()) throw InvalidMatrix("build_transform: non-finite cov");

  const EigenDecomposition e = sym_eigen(cov);
  const int d = cov.dim();
  KernelTransform kt;
  kt.A = Matrix(d);
  // A = diag(1/sqrt(d)) B': rows of B' scaled by the inverse root spectrum.
  for (int i = 0; i < d; ++i) {
    const double s = 1.0 / std::sqrt(e.d[i]);
    for (int j = 0; j < d; ++j) kt.A.at(i, j) = s * e.B.at(j, i);
  }

  const size_t n = points.size();
  std::vector<Vec> t(n);
  for (size_t i = 0; i < n; ++i) t[i] = kt.A.mul(points[i]);
  double sum = 0.0;
  size_t cnt = 0;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      double s2 = 0.0;
      for (int k = 0; k < d; ++k) {
        const double diff = t[i][k] - t[j][k];
        s2 += diff * diff;
      }
      sum += std::sqrt(s2);
      ++cnt;
    }
  const double mean_dist = sum / double(cnt);
  kt.sigma_k = sigma_factor * (mean_dist > 0.0 ? mean_dist : 1.0);
  return kt;
}

double SurrogateModel::predict(const Vec& x) const {
  const Vec t = A.mul(x);
  const double inv2s2 = 1.0 / (2.0 * sigma_k * sigma_k);
  double score = 0.0;
  for (size_t i = 0; i < points.size(); ++i) {
    if (beta[i] == 0.0) continue;
    double s2 = 0.0;
    const Vec& p = points[i];
    for (size_t k = 0; k < p.size(); ++k) {
      const double diff = t[k] - p[k];
      s2 += diff * diff;
    }
    score += beta[i] * std::exp(-s2 * inv2s2);
  }
  return -score;  // higher latent rank score = better = lower output
}

SurrogateModel train(std::vector<TrainPoint> pts,
                     const SurrogateHyperParams& hp,
                     const KernelTransform& kt) {
  // Order best to worst; ties broken by recency for determinism.
  std::stable_sort(pts.begin(), pts.end(),
                   [](const TrainPoint& a, const TrainPoint& b) {
                     if (a.f != b.f) return a.f < b.f;
                     return a.seq > b.seq;
                   });

  // Conflicting duplicates (same coordinates, different fitness) would make
  // the ranking contradictory; keep the most recent observation.
  int dropped = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    for (size_t j = i + 1; j < pts.size();) {
      if (pts[i].x == pts[j].x) {
        if (pts[i].seq < pts[j].seq) std::swap(pts[i], pts[j]);
        pts.erase(pts.begin() + j);
        ++dropped;
      } else {
        ++j;
      }
    }
  }
  if (dropped > 0)
    std::stable_sort(pts.begin(), pts.end(),
                     [](const TrainPoint& a, const TrainPoint& b) {
                       if (a.f != b.f) return a.f < b.f;
                       return a.seq > b.seq;
                     });

  const int n = int(pts.size());
  if (n < 2) throw NotEnoughData("train: need at least 2 distinct points");

  SurrogateModel m;
  m.hp = hp;
  m.A = kt.A;
  m.sigma_k = kt.sigma_k;
  m.dropped_duplicates = dropped;
  m.points.resize(n);
  m.train_f.resize(n);
  for (int i = 0; i < n; ++i) {
    m.points[i] = kt.A.mul(pts[i].x);
    m.train_f[i] = pts[i].f;
  }

  // Kernel matrix on transformed points.
  const double inv2s2 = 1.0 / (2.0 * m.sigma_k * m.sigma_k);
  std::vector<double> kmat(size_t(n) * n);
  for (int i = 0; i < n; ++i) {
    kmat[size_t(i) * n + i] = 1.0;
    for (int j = i + 1; j < n; ++j) {
      double s2 = 0.0;
      for (size_t k = 0; k < m.points[i].size(); ++k) {
        const double diff = m.points[i][k] - m.points[j][k];
        s2 += diff * diff;
      }
      const double v = std::exp(-s2 * inv2s2);
      kmat[size_t(i) * n + j] = v;
      kmat[size_t(j) * n + i] = v;
    }
  }
  m.kernel_ops += std::int64_t(n) * n;

  // Gram matrix of adjacent difference vectors phi(x_k) - phi(x_{k+1}).
  const int nc = n - 1;
  std::vector<double> gram(size_t(nc) * nc);
  for (int j = 0; j < nc; ++j)
    for (int k = 0; k < nc; ++k)
      gram[size_t(j) * nc + k] =
          kmat[size_t(j) * n + k] - kmat[size_t(j) * n + k + 1] -
          kmat[size_t(j + 1) * n + k] + kmat[size_t(j + 1) * n + k + 1];

  Vec cost(nc), grad(nc, 1.0);
  std::vector<char> usable(nc, 1);
  for (int k = 0; k < nc; ++k) {
    cost[k] = hp.c_base * std::pow(double(n - 1 - k), hp.c_pow);
    // A tie in fitness or a collapsed difference vector gives no ordering
    // information; freeze such constraints at zero.
    if (m.train_f[k] == m.train_f[k + 1] || gram[size_t(k) * nc + k] <= 1e-300)
      usable[k] = 0;
  }

  m.alpha.assign(nc, 0.0);
  const double kkt_tol = 1e-3;
  const std::int64_t max_updates =
      std::int64_t(std::lround(hp.iter_factor)) * nc;

  // Most violated constraint under the box 0 <= alpha_k <= cost_k.
  auto pick = [&]() {
    int best = -1;
    double best_viol = kkt_tol;
    for (int k = 0; k < nc; ++k) {
      if (!usable[k]) continue;
      const double g = grad[k];
      double viol;
      if (m.alpha[k] <= 0.0)
        viol = g;
      else if (m.alpha[k] >= cost[k])
        viol = -g;
      else
        viol = std::fabs(g);
      if (viol > best_viol) {
        best_viol = viol;
        best = k;
      }
    }
    return best;
  };

  int best = pick();
  for (std::int64_t it = 0; it < max_updates && best >= 0; ++it) {
    const double denom = gram[size_t(best) * nc + best];
    const double next =
        std::clamp(m.alpha[best] + grad[best] / denom, 0.0, cost[best]);
    const double delta = next - m.alpha[best];
    m.alpha[best] = next;
    m.kernel_ops += nc;
    if (delta == 0.0) {
      // Numerically pinned coordinate: no progress possible at this
      // gradient, so freeze it instead of re-selecting it forever.
      usable[best] = 0;
      best = pick();
      continue;
    }
    // Fused gradient update and next-candidate scan (single memory pass).
    const double* grow = &gram[size_t(best) * nc];
    int nb = -1;
    double bv = kkt_tol;
    for (int k = 0; k < nc; ++k) {
      const double g = (grad[k] -= delta * grow[k]);
      if (!usable[k]) continue;
      double viol;
      if (m.alpha[k] <= 0.0)
        viol = g;
      else if (m.alpha[k] >= cost[k])
        viol = -g;
      else
        viol = std::fabs(g);
      if (viol > bv) {
        bv = viol;
        nb = k;
      }
    }
    best = nb;
  }

  // Collapse the pairwise expansion into per-point coefficients:
  // F(x) = sum_k alpha_k (k(x_k, x) - k(x_{k+1}, x)) = sum_i beta_i k(x_i, x).
  m.beta.assign(n, 0.0);
  for (int k = 0; k < nc; ++k) {
    m.beta[k] += m.alpha[k];
    m.beta[k + 1] -= m.alpha[k];
  }
  return m;
}

double rank_error_from_scores(const Vec& predicted, const Vec& truth) {
  if (predicted.size() != truth.size() || predicted.size() < 2)
    throw InvalidSample("rank_error: need two same-length samples, size >= 2");
  const size_t n = predicted.size();
  double discord = 0.0;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) {
      const double dt = truth[i] - truth[j];
      const double dp = predicted[i] - predicted[j];
      const int st = (dt > 0.0) - (dt < 0.0);
      const int sp = (dp > 0.0) - (dp < 0.0);
      if (st == 0 && sp == 0) continue;
      if (st == 0 || sp == 0)
        discord += 0.5;
      else if (st != sp)
        discord += 1.0;
    }
  return discord / (double(n) * double(n - 1) / 2.0);
}

double rank_error(const SurrogateModel& model, const std::vector<Vec>& xs,
                  const Vec& fs) {
  Vec pred(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) pred[i] = model.predict(xs[i]);
  return rank_error_from_scores(pred, fs);
}

}  // namespace sacma
