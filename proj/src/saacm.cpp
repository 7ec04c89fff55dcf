#include "sacma/saacm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sacma/errors.hpp"

namespace sacma {

SaAcmConfig SaAcmConfig::standard(int dim, int lambda) {
  SaAcmConfig cfg;
  cfg.box = HyperBox::standard(dim, lambda);
  cfg.fixed_hp = cfg.box.defaults();
  return cfg;
}

SaAcmState saacm_init(const CmaParams& params, const SaAcmConfig& cfg,
                      const Vec& x0, double sigma0, Rng trial_rng) {
  SaAcmState st;
  st.cma = cma_init(params, x0, sigma0);
  st.cfg = cfg;
  // The hyper-parameter search starts centered on the default settings.
  cfg.box.to_unit(cfg.box.defaults(), st.hyper.mean.data());
  st.rng_cma = trial_rng.stream("cma");
  st.rng_hyper = trial_rng.stream("hyper");
  return st;
}

int adapt_nhat(double err, const SaAcmConfig& cfg) {
  const double frac = std::max(0.0, cfg.tau_err - err) / cfg.tau_err;
  const int n = int(std::lround(cfg.nhat_max * frac));
  return std::clamp(n, 0, cfg.nhat_max);
}

namespace {

// Newest `count` archive points, optionally skipping the newest `skip`.
std::vector<TrainPoint> newest_points(const std::vector<ArchivePoint>& archive,
                                      size_t count, size_t skip) {
  std::vector<TrainPoint> out;
  if (archive.size() <= skip) return out;
  const size_t avail = archive.size() - skip;
  const size_t take = std::min(count, avail);
  out.reserve(take);
  for (size_t i = avail - take; i < avail; ++i)
    out.push_back({archive[i].x, archive[i].f, archive[i].seq});
  return out;
}

SurrogateModel train_on_archive(const SaAcmState& st,
                                const SurrogateHyperParams& hp, size_t skip) {
  const auto pts = newest_points(st.archive, size_t(hp.n_train), skip);
  std::vector<Vec> xs(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) xs[i] = pts[i].x;
  const KernelTransform kt =
      build_transform(st.cma.cov, xs, hp.sigma_factor);
  return train(pts, hp, kt);
}

void archive_insert(SaAcmState& st, const Vec& x, double f) {
  // Same coordinates seen again: keep only the newest observation.
  for (auto it = st.archive.begin(); it != st.archive.end(); ++it) {
    if (it->x == x) {
      st.archive.erase(it);
      break;
    }
  }
  st.archive.push_back({x, f, st.next_seq++});
  // Only the newest n_hi + lambda points can ever be used again.
  const size_t cap =
      size_t(st.cfg.box.n_hi) + size_t(st.cma.params.lambda) + 8;
  if (st.archive.size() > cap)
    st.archive.erase(st.archive.begin(),
                     st.archive.begin() + (st.archive.size() - cap));
}

}  // namespace

HyperStepResult hyper_step(SaAcmState& st) {
  HyperStepResult res;
  const int lambda = st.cma.params.lambda;
  const size_t need = size_t(lambda) + size_t(st.cfg.box.n_lo);
  if (st.archive.size() < need) return res;  // keep previous hyper-params

  // Hold out the newest lambda true evaluations for validation.
  std::vector<Vec> val_x;
  Vec val_f;
  for (size_t i = st.archive.size() - size_t(lambda); i < st.archive.size();
       ++i) {
    val_x.push_back(st.archive[i].x);
    val_f.push_back(st.archive[i].f);
  }

  const int lam_hyp = std::max(1, st.cfg.lambda_hyp);
  std::vector<std::array<double, 5>> units(lam_hyp);
  Vec errs(lam_hyp);
  Vec dist2(lam_hyp);

  for (int k = 0; k < lam_hyp; ++k) {
    std::array<double, 5>& u = units[k];
    dist2[k] = 0.0;
    for (int d = 0; d < 5; ++d) {
      u[d] = std::clamp(
          st.hyper.mean[d] + st.hyper.step[d] * st.rng_hyper.normal(), 0.0,
          1.0);
      const double dd = u[d] - st.hyper.mean[d];
      dist2[k] += dd * dd;
    }
    const SurrogateHyperParams hp = st.cfg.box.from_unit(u.data());
    const SurrogateModel model = train_on_archive(st, hp, size_t(lambda));
    errs[k] = rank_error(model, val_x, val_f);
  }

  // Truncation selection of the best quartile, then smoothed updates of the
  // search distribution over the unit box.  With only lambda validation
  // points the error is coarsely quantized, so ties are broken in favor of
  // candidates close to the current mean; this keeps quantization noise
  // from random-walking the distribution.
  std::vector<int> order(lam_hyp);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (errs[a] != errs[b]) return errs[a] < errs[b];
    return dist2[a] < dist2[b];
  });
  const int mu_hyp = (lam_hyp + 3) / 4;
  for (int d = 0; d < 5; ++d) {
    double em = 0.0;
    for (int i = 0; i < mu_hyp; ++i) em += units[order[i]][d];
    em /= mu_hyp;
    double ev = 0.0;
    for (int i = 0; i < mu_hyp; ++i) {
      const double diff = units[order[i]][d] - em;
      ev += diff * diff;
    }
    ev /= mu_hyp;
    st.hyper.mean[d] = 0.7 * st.hyper.mean[d] + 0.3 * em;
    st.hyper.step[d] =
        std::clamp(0.7 * st.hyper.step[d] + 0.3 * std::sqrt(ev), 0.02, 0.3);
  }

  res.updated = true;
  res.winner = st.cfg.box.from_unit(units[order[0]].data());
  res.winner_err = errs[order[0]];
  return res;
}

CycleStatus saacm_cycle(SaAcmState& st, Problem& prob) {
  const int lambda = st.cma.params.lambda;
  if (prob.remaining() < lambda) return CycleStatus::BudgetExhausted;

  // Surrogate phase: n_hat generations ranked by the model, no true
  // evaluations, no termination-history updates.
  const double dbg_sigma0 = st.cma.sigma;  // TEMP instrument
  const Vec dbg_mean0 = st.cma.mean;       // TEMP instrument
  const int nhat_in = st.nhat;             // TEMP instrument
  if (st.cycles >= st.cfg.g_start && st.model && st.nhat > 0) {
    for (int g = 0; g < st.nhat; ++g) {
      Population pop = cma_ask(st.cma, st.rng_cma);
      pop.fitness.resize(lambda);
      for (int i = 0; i < lambda; ++i)
        pop.fitness[i] = st.model->predict(pop.x[i]);
      sanitize_fitness(pop.fitness);
      cma_tell(st.cma, pop, /*record_history=*/false);
    }
  }
  const double dbg_sigma1 = st.cma.sigma;  // TEMP instrument
  double dbg_mdist = 0.0;                  // TEMP instrument
  for (size_t i = 0; i < dbg_mean0.size(); ++i) {
    const double d = st.cma.mean[i] - dbg_mean0[i];
    dbg_mdist += d * d;
  }
  dbg_mdist = std::sqrt(dbg_mdist) / dbg_sigma0;

  // One true generation.  The archive and the rank-error check below see
  // the same sanitized values the distribution update ranks.
  Population pop = cma_ask(st.cma, st.rng_cma);
  pop.fitness.resize(lambda);
  for (int i = 0; i < lambda; ++i) {
    pop.fitness[i] = prob.eval(pop.x[i]);
    if (pop.fitness[i] < st.best_f) {
      st.best_f = pop.fitness[i];
      st.best_x = pop.x[i];
    }
  }
  sanitize_fitness(pop.fitness);
  cma_tell(st.cma, pop);
  ++st.true_gens;
  for (int i = 0; i < lambda; ++i) archive_insert(st, pop.x[i], pop.fitness[i]);

  // Score the model that produced this cycle's surrogate ranking on the
  // fresh points; no model yet counts as maximally wrong.
  st.last_rank_err =
      st.model ? rank_error(*st.model, pop.x, pop.fitness) : 1.0;
  st.nhat = adapt_nhat(st.last_rank_err, st.cfg);

  // Hyper-parameter self-adaptation, then re-train on the newest points.
  if (st.cfg.self_adapt) {
    const HyperStepResult hs = hyper_step(st);
    if (hs.updated) st.current_hp = hs.winner;
  } else if (!st.current_hp) {
    st.current_hp = st.cfg.box.clamp(st.cfg.fixed_hp);
  }
  if (st.current_hp && st.archive.size() >= size_t(st.cfg.box.n_lo))
    st.model = train_on_archive(st, *st.current_hp, 0);

  // TEMP instrument
  if (std::getenv("SACMA_TRACE_SIGMA"))
    std::fprintf(stderr, "cyc %lld nhat_in %d sig0 %.3e sig_phase %.3e sig_true %.3e err %.3f mdist %.3e\n",
                 (long long)st.cycles, nhat_in, dbg_sigma0, dbg_sigma1,
                 st.cma.sigma, st.last_rank_err, dbg_mdist);

  ++st.cycles;
  return CycleStatus::Ok;
}

RunResult run_saacm(Problem& prob, const CmaParams& params,
                    const SaAcmConfig& cfg, const Vec& x0, double sigma0,
                    Rng trial_rng, std::int64_t max_gens,
                    std::int64_t max_run_evals) {
  SaAcmState st = saacm_init(params, cfg, x0, sigma0, trial_rng);
  RunResult res;
  const std::int64_t start_evals = prob.evals;

  while (true) {
    if (prob.target_hit()) {
      res.stop = StopReason::Target;
      break;
    }
    if (st.cma.gen >= max_gens) {
      res.stop = StopReason::MaxGenerations;
      break;
    }
    if (prob.remaining() < params.lambda ||
        (prob.evals - start_evals) + params.lambda > max_run_evals) {
      res.stop = StopReason::Budget;
      break;
    }
    if (saacm_cycle(st, prob) == CycleStatus::BudgetExhausted) {
      res.stop = StopReason::Budget;
      break;
    }
    if (prob.target_hit()) {
      res.stop = StopReason::Target;
      break;
    }
    if (auto r = cma_check_termination(st.cma)) {
      res.stop = stop_from_termination(*r);
      break;
    }
  }

  res.best_f = st.best_f;
  res.best_x = st.best_x;
  res.evals_used = prob.evals - start_evals;
  res.gens = st.cma.gen;
  return res;
}

}  // namespace sacma
