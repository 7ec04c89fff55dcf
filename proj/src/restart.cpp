#include "sacma/restart.hpp"

#include <algorithm>
#include <cmath>

#include "sacma/errors.hpp"

namespace sacma {

std::int64_t RestartLedger::total_evals() const {
  std::int64_t s = 0;
  for (const auto& r : runs) s += r.evals;
  return s;
}

InnerRunner make_runner(int dim, const AlgoSettings& settings) {
  if (!settings.surrogate) {
    const bool active = settings.active;
    return [dim, active](Problem& prob, int lambda, const Vec& x0,
                         double sigma0, Rng run_rng,
                         std::int64_t max_run_evals) {
      const CmaParams params = default_params(dim, lambda, active);
      return run_cma(prob, params, x0, sigma0, run_rng,
                     std::numeric_limits<std::int64_t>::max(), max_run_evals);
    };
  }
  const AlgoSettings s = settings;
  return [dim, s](Problem& prob, int lambda, const Vec& x0, double sigma0,
                  Rng run_rng, std::int64_t max_run_evals) {
    const CmaParams params = default_params(dim, lambda, s.active);
    SaAcmConfig cfg = SaAcmConfig::standard(dim, lambda);
    cfg.g_start = s.g_start;
    cfg.nhat_max = s.nhat_max;
    cfg.lambda_hyp = s.lambda_hyp;
    cfg.tau_err = s.tau_err;
    cfg.self_adapt = s.self_adapt;
    if (s.fixed_hp) cfg.fixed_hp = cfg.box.clamp(*s.fixed_hp);
    return run_saacm(prob, params, cfg, x0, sigma0, run_rng,
                     std::numeric_limits<std::int64_t>::max(), max_run_evals);
  };
}

namespace {

Vec sample_x0(int dim, const RestartPolicy& policy, Rng& rng) {
  Vec x0(dim);
  for (int i = 0; i < dim; ++i) x0[i] = rng.uniform(policy.box_lo, policy.box_hi);
  return x0;
}

}  // namespace

RestartResult run_restarts(Problem& prob, int dim, const RestartPolicy& policy,
                           const InnerRunner& runner, Rng trial_rng) {
  if (dim < 1) throw InvalidParam("run_restarts: dim must be >= 1");
  if (policy.max_restarts < 0)
    throw InvalidParam("run_restarts: max_restarts must be >= 0");
  const int base_lambda = policy.base_lambda > 0
                              ? policy.base_lambda
                              : default_params(dim).lambda;
  if (base_lambda < 2)
    throw InvalidParam("run_restarts: base lambda must be >= 2");

  Rng restart_rng = trial_rng.stream("restart");
  Rng run_seed_rng = trial_rng.stream("run");

  RestartResult res;
  std::int64_t n_large = 0;  // completed large-regime runs
  int lambda_large = base_lambda;
  std::int64_t last_large_evals = 0;  // most recent large (or first) run

  for (std::int64_t run_idx = 0;; ++run_idx) {
    if (prob.target_hit()) {
      res.target_hit = true;
      break;
    }
    if (run_idx > policy.max_restarts) break;

    int lambda = base_lambda;
    double sigma0 = policy.sigma0;
    Regime regime = Regime::None;
    std::int64_t run_cap = std::numeric_limits<std::int64_t>::max();

    if (policy.kind == RestartKind::Ipop) {
      for (std::int64_t k = 0; k < run_idx; ++k) lambda *= 2;
    } else if (run_idx > 0) {
      // Continue whichever regime has consumed fewer evaluations.
      if (res.ledger.large_evals <= res.ledger.small_evals) {
        regime = Regime::Large;
        ++n_large;
        lambda_large = base_lambda;
        for (std::int64_t k = 0; k < n_large; ++k) lambda_large *= 2;
        lambda = lambda_large;
      } else {
        regime = Regime::Small;
        const double u = restart_rng.uniform01();
        const double u2 = restart_rng.uniform01();
        lambda = int(std::floor(
            base_lambda *
            std::pow(double(lambda_large) / base_lambda, u * u)));
        lambda = std::max(lambda, 2);
        sigma0 = policy.sigma0 * std::pow(10.0, -2.0 * u2);
        run_cap = std::max<std::int64_t>(1, last_large_evals / 2);
      }
    }

    if (prob.remaining() < lambda) break;

    const Vec x0 = sample_x0(dim, policy, restart_rng);
    const Rng run_rng = run_seed_rng.stream(std::uint64_t(run_idx));
    const RunResult rr = runner(prob, lambda, x0, sigma0, run_rng, run_cap);

    RunRecord rec;
    rec.lambda = lambda;
    rec.sigma0 = sigma0;
    rec.evals = rr.evals_used;
    rec.best_f = rr.best_f;
    rec.stop = rr.stop;
    rec.regime = regime;
    res.ledger.runs.push_back(rec);

    if (regime == Regime::Large) res.ledger.large_evals += rr.evals_used;
    if (regime == Regime::Small) res.ledger.small_evals += rr.evals_used;
    if (regime != Regime::Small) last_large_evals = rr.evals_used;

    if (rr.best_f < res.best_f) {
      res.best_f = rr.best_f;
      res.best_x = rr.best_x;
    }
    if (rr.stop == StopReason::Target) {
      res.target_hit = true;
      break;
    }
  }
  if (prob.target_hit()) res.target_hit = true;
  return res;
}

}  // namespace sacma
