#include "sacma/cma.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sacma/errors.hpp"

namespace sacma {

CmaParams default_params(int dim, std::optional<int> lambda_override,
                         bool active) {
  if (dim < 1) throw InvalidParam("default_params: dim must be >= 1");
  CmaParams p;
  p.dim = dim;
  p.lambda = lambda_override ? *lambda_override
                             : 4 + int(std::floor(3.0 * std::log(double(dim))));
  if (p.lambda < 2) throw InvalidParam("default_params: lambda must be >= 2");
  p.mu = p.lambda / 2;
  p.active = active;

  // Raw log-rank weights, positive for the best half.
  Vec wraw(p.lambda);
  for (int i = 0; i < p.lambda; ++i)
    wraw[i] = std::log((p.lambda + 1) / 2.0) - std::log(double(i + 1));

  double pos_sum = 0.0, pos_sq = 0.0;
  for (int i = 0; i < p.mu; ++i) {
    pos_sum += wraw[i];
    pos_sq += wraw[i] * wraw[i];
  }
  p.mu_eff = pos_sum * pos_sum / pos_sq;

  const double d = double(dim);
  p.c_sigma = (p.mu_eff + 2.0) / (d + p.mu_eff + 5.0);
  p.d_sigma = 1.0 +
              2.0 * std::max(0.0, std::sqrt((p.mu_eff - 1.0) / (d + 1.0)) - 1.0) +
              p.c_sigma;
  p.c_c = (4.0 + p.mu_eff / d) / (d + 4.0 + 2.0 * p.mu_eff / d);
  p.c1 = 2.0 / ((d + 1.3) * (d + 1.3) + p.mu_eff);
  p.c_mu = std::min(1.0 - p.c1, 2.0 * (p.mu_eff - 2.0 + 1.0 / p.mu_eff) /
                                    ((d + 2.0) * (d + 2.0) + p.mu_eff));
  p.chi_n = std::sqrt(d) * (1.0 - 1.0 / (4.0 * d) + 1.0 / (21.0 * d * d));

  p.weights.assign(p.lambda, 0.0);
  for (int i = 0; i < p.mu; ++i) p.weights[i] = wraw[i] / pos_sum;

  if (active && p.c_mu > 0.0) {
    double neg_sum = 0.0, neg_sq = 0.0;
    for (int i = p.mu; i < p.lambda; ++i) {
      neg_sum += wraw[i];
      neg_sq += wraw[i] * wraw[i];
    }
    if (neg_sum < 0.0 && neg_sq > 0.0) {
      const double mu_eff_neg = neg_sum * neg_sum / neg_sq;
      const double a_mu = 1.0 + p.c1 / p.c_mu;
      const double a_eff = 1.0 + 2.0 * mu_eff_neg / (p.mu_eff + 2.0);
      const double a_pd = (1.0 - p.c1 - p.c_mu) / (d * p.c_mu);
      const double scale =
          std::min(a_mu, std::min(a_eff, a_pd)) / std::fabs(neg_sum);
      for (int i = p.mu; i < p.lambda; ++i) p.weights[i] = scale * wraw[i];
    }
  }
  return p;
}

namespace {

void validate_params(const CmaParams& p) {
  if (p.dim < 1) throw InvalidParam("cma: dim must be >= 1");
  if (p.lambda < 2) throw InvalidParam("cma: lambda must be >= 2");
  if (p.mu < 1 || p.mu > (p.lambda + 1) / 2)
    throw InvalidParam("cma: mu out of range");
  if (int(p.weights.size()) != p.lambda)
    throw InvalidParam("cma: weights size != lambda");
  double sum = 0.0;
  for (int i = 0; i < p.mu; ++i) {
    if (!(p.weights[i] > 0.0) && !(p.weights[i] == 0.0 && i > 0))
      throw InvalidParam("cma: positive weights must be > 0");
    if (i > 0 && p.weights[i] > p.weights[i - 1])
      throw InvalidParam("cma: weights must be non-increasing");
    sum += p.weights[i];
  }
  if (std::fabs(sum - 1.0) > 1e-12)
    throw InvalidParam("cma: positive weights must sum to 1");
  for (int i = p.mu; i < p.lambda; ++i)
    if (p.weights[i] > 0.0)
      throw InvalidParam("cma: weights beyond mu must be <= 0");
  if (!(p.c_sigma >= 0.0 && p.c_sigma <= 1.0))
    throw InvalidParam("cma: c_sigma out of [0, 1]");
  if (!(p.c_c >= 0.0 && p.c_c <= 1.0))
    throw InvalidParam("cma: c_c out of [0, 1]");
  if (p.c1 < 0.0 || p.c_mu < 0.0 || p.c1 + p.c_mu > 1.0 + 1e-12)
    throw InvalidParam("cma: c1 + c_mu must lie in [0, 1]");
}

void ensure_eigen(CmaState& st) {
  if (!st.eig_dirty) return;
  st.eig = sym_eigen(st.cov);
  st.eig_dirty = false;
}

// B diag(1/sqrt(d)) B' v
Vec inv_sqrt_apply(const EigenDecomposition& e, const Vec& v) {
  Vec t = e.B.tmul(v);
  for (size_t i = 0; i < t.size(); ++i) t[i] /= std::sqrt(e.d[i]);
  return e.B.mul(t);
}

// Bound on the long stagnation buffers; far beyond any run at the budgets
// used here, so it only guards memory on pathological drivers.
constexpr size_t kStagCap = 20000;

double median_of(std::vector<double> v) {
  const size_t n = v.size();
  auto mid = v.begin() + n / 2;
  std::nth_element(v.begin(), mid, v.end());
  double m = *mid;
  if (n % 2 == 0) {
    std::nth_element(v.begin(), mid - 1, mid);
    m = 0.5 * (m + *(mid - 1));
  }
  return m;
}

// Median of the newest k entries is no better than the median of the oldest
// k entries among the last w recorded generations.
bool no_improvement(const std::deque<double>& h, size_t w, size_t k) {
  const size_t begin = h.size() - w;
  std::vector<double> oldest(h.begin() + begin, h.begin() + begin + k);
  std::vector<double> newest(h.end() - k, h.end());
  return median_of(std::move(newest)) >= median_of(std::move(oldest));
}

}  // namespace

CmaState cma_init(const CmaParams& params, const Vec& x0, double sigma0) {
  validate_params(params);
  if (int(x0.size()) != params.dim)
    throw InvalidParam("cma_init: x0 size != dim");
  if (!all_finite(x0)) throw InvalidParam("cma_init: x0 must be finite");
  if (!(sigma0 > 0.0)) throw InvalidParam("cma_init: sigma0 must be > 0");

  CmaState st;
  st.params = params;
  st.mean = x0;
  st.sigma = sigma0;
  st.sigma0 = sigma0;
  st.cov = SymMatrix::identity(params.dim);
  st.p_sigma.assign(params.dim, 0.0);
  st.p_c.assign(params.dim, 0.0);
  st.hist_cap =
      10 + size_t(std::ceil(30.0 * params.dim / double(params.lambda)));
  st.eig_dirty = true;
  return st;
}

Population cma_ask(CmaState& st, Rng& rng) {
  ensure_eigen(st);
  const int d = st.params.dim;
  Population pop;
  pop.x.resize(st.params.lambda);
  pop.z.resize(st.params.lambda);
  Vec sd(d);
  for (int i = 0; i < d; ++i) sd[i] = std::sqrt(st.eig.d[i]);
  for (int k = 0; k < st.params.lambda; ++k) {
    Vec z = gaussian_vector(rng, d);
    Vec y(d);
    for (int i = 0; i < d; ++i) y[i] = sd[i] * z[i];
    Vec by = st.eig.B.mul(y);
    Vec x(d);
    for (int i = 0; i < d; ++i) x[i] = st.mean[i] + st.sigma * by[i];
    pop.z[k] = std::move(z);
    pop.x[k] = std::move(x);
  }
  return pop;
}

void cma_tell(CmaState& st, const Population& pop, bool record_history) {
  const CmaParams& p = st.params;
  const int d = p.dim, lam = p.lambda;
  if (int(pop.x.size()) != lam || int(pop.fitness.size()) != lam)
    throw InvalidFitness("cma_tell: population incomplete");
  for (double f : pop.fitness)
    if (!std::isfinite(f)) throw InvalidFitness("cma_tell: non-finite fitness");

  // Ranks; ties broken by sampling index via stable sort.
  std::vector<int> order(lam);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return pop.fitness[a] < pop.fitness[b];
  });

  ensure_eigen(st);
  const Vec m_old = st.mean;
  const double sigma = st.sigma;

  Vec y_w(d, 0.0);
  for (int i = 0; i < p.mu; ++i) {
    const Vec& x = pop.x[order[i]];
    const double w = p.weights[i];
    for (int j = 0; j < d; ++j) y_w[j] += w * (x[j] - m_old[j]) / sigma;
  }

  for (int j = 0; j < d; ++j) st.mean[j] = m_old[j] + sigma * y_w[j];

  // Step-size path.
  const double cs = p.c_sigma;
  const Vec cinv_yw = inv_sqrt_apply(st.eig, y_w);
  const double ps_coef = std::sqrt(cs * (2.0 - cs) * p.mu_eff);
  for (int j = 0; j < d; ++j)
    st.p_sigma[j] = (1.0 - cs) * st.p_sigma[j] + ps_coef * cinv_yw[j];

  const double ps_norm = norm2(st.p_sigma);
  const double denom = 1.0 - std::pow(1.0 - cs, 2.0 * double(st.gen + 1));
  bool hsig;
  if (denom <= 0.0)
    hsig = (ps_norm == 0.0);
  else
    hsig = ps_norm / std::sqrt(denom) < (1.4 + 2.0 / (d + 1.0)) * p.chi_n;

  // Covariance path.
  const double cc = p.c_c;
  const double pc_coef = hsig ? std::sqrt(cc * (2.0 - cc) * p.mu_eff) : 0.0;
  for (int j = 0; j < d; ++j)
    st.p_c[j] = (1.0 - cc) * st.p_c[j] + pc_coef * y_w[j];

  // Covariance update: decay + rank-one + rank-mu (negative weights
  // renormalized to Mahalanobis length sqrt(D)).
  const double delta_hsig = hsig ? 0.0 : cc * (2.0 - cc);
  const double w_sum_all =
      std::accumulate(p.weights.begin(), p.weights.end(), 0.0);
  const double decay = 1.0 + p.c1 * delta_hsig - p.c1 - p.c_mu * w_sum_all;
  st.cov.scale(decay);
  if (p.c1 > 0.0) st.cov.rank_one(p.c1, st.p_c);
  if (p.c_mu > 0.0) {
    Vec y(d);
    for (int i = 0; i < lam; ++i) {
      const double w = p.weights[i];
      if (w == 0.0) continue;
      const Vec& x = pop.x[order[i]];
      for (int j = 0; j < d; ++j) y[j] = (x[j] - m_old[j]) / sigma;
      double w_adj = w;
      if (w < 0.0) {
        const Vec ciy = inv_sqrt_apply(st.eig, y);
        w_adj = w * d / std::max(dot(ciy, ciy), 1e-300);
      }
      st.cov.rank_one(p.c_mu * w_adj, y);
    }
  }

  // Step-size; exponent capped to avoid single-step blowups.
  const double arg = (cs / p.d_sigma) * (ps_norm / p.chi_n - 1.0);
  st.sigma *= std::exp(std::min(1.0, arg));

  const double best = pop.fitness[order[0]];
  const double median = pop.fitness[order[lam / 2]];
  if (record_history) {
    st.best_hist.push_back(best);
    st.median_hist.push_back(median);
    while (st.best_hist.size() > st.hist_cap) st.best_hist.pop_front();
    while (st.median_hist.size() > st.hist_cap) st.median_hist.pop_front();
    st.stag_best.push_back(best);
    st.stag_median.push_back(median);
    while (st.stag_best.size() > kStagCap) st.stag_best.pop_front();
    while (st.stag_median.size() > kStagCap) st.stag_median.pop_front();
    st.last_best = best;
    st.last_median = median;
    st.has_last = true;
  }

  ++st.gen;
  st.eig_dirty = true;
}

std::optional<TerminationReason> cma_check_termination(CmaState& st) {
  if (st.gen < 1) return std::nullopt;

  if (st.has_last && st.last_best == st.last_median)
    return TerminationReason::FlatFitness;

  if (st.best_hist.size() >= st.hist_cap) {
    const auto [lo, hi] =
        std::minmax_element(st.best_hist.begin(), st.best_hist.end());
    if (*hi - *lo < 1e-12) return TerminationReason::TolFun;
  }

  // Long-window stagnation: a run whose per-generation best and median both
  // stopped improving is not converging and should hand its budget to a
  // restart.  Window and slice sizes follow common restart practice.
  {
    const size_t t = st.stag_best.size();
    const size_t w = static_cast<size_t>(std::ceil(
        120.0 + 30.0 * st.params.dim / st.params.lambda + 0.2 * double(t)));
    if (t >= w) {
      const size_t k = std::max<size_t>(1, w / 5);
      if (no_improvement(st.stag_best, w, k) &&
          no_improvement(st.stag_median, w, k))
        return TerminationReason::TolFun;
    }
  }

  const double tol_x = 1e-12 * st.sigma0;
  bool small = true;
  for (int i = 0; i < st.params.dim && small; ++i) {
    if (st.sigma * std::sqrt(st.cov.at(i, i)) >= tol_x) small = false;
    if (st.sigma * std::fabs(st.p_c[i]) >= tol_x) small = false;
  }
  if (small) return TerminationReason::TolX;

  ensure_eigen(st);
  const double d_max = st.eig.d[0];
  const double d_min =
      st.eig.d_min_raw > 0.0 ? st.eig.d_min_raw : 1e-300;
  if (d_max / d_min > 1e14) return TerminationReason::ConditionCov;

  return std::nullopt;
}

StopReason stop_from_termination(TerminationReason r) {
  switch (r) {
    case TerminationReason::TargetHit: return StopReason::Target;
    case TerminationReason::TolFun: return StopReason::TolFun;
    case TerminationReason::TolX: return StopReason::TolX;
    case TerminationReason::ConditionCov: return StopReason::Condition;
    case TerminationReason::FlatFitness: return StopReason::FlatFitness;
    case TerminationReason::MaxGenerations: return StopReason::MaxGenerations;
  }
  return StopReason::Budget;
}

void sanitize_fitness(Vec& fitness) {
  for (double& f : fitness)
    if (!std::isfinite(f)) f = std::numeric_limits<double>::max();
}

RunResult run_cma(Problem& prob, const CmaParams& params, const Vec& x0,
                  double sigma0, Rng trial_rng, std::int64_t max_gens,
                  std::int64_t max_run_evals) {
  Rng rng = trial_rng.stream("cma");
  CmaState st = cma_init(params, x0, sigma0);
  RunResult res;
  const std::int64_t start_evals = prob.evals;

  while (true) {
    if (prob.target_hit()) {
      res.stop = StopReason::Target;
      break;
    }
    if (st.gen >= max_gens) {
      res.stop = StopReason::MaxGenerations;
      break;
    }
    if (prob.remaining() < params.lambda ||
        (prob.evals - start_evals) + params.lambda > max_run_evals) {
      res.stop = StopReason::Budget;
      break;
    }
    Population pop = cma_ask(st, rng);
    pop.fitness.resize(params.lambda);
    for (int i = 0; i < params.lambda; ++i) {
      pop.fitness[i] = prob.eval(pop.x[i]);
      if (pop.fitness[i] < res.best_f) {
        res.best_f = pop.fitness[i];
        res.best_x = pop.x[i];
      }
    }
    sanitize_fitness(pop.fitness);
    cma_tell(st, pop);
    if (prob.target_hit()) {
      res.stop = StopReason::Target;
      break;
    }
    if (auto r = cma_check_termination(st)) {
      res.stop = stop_from_termination(*r);
      break;
    }
  }

  res.evals_used = prob.evals - start_evals;
  res.gens = st.gen;
  return res;
}

}  // namespace sacma
