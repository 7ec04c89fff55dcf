#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "sacma/cma.hpp"
#include "sacma/surrogate.hpp"

namespace sacma {

// Surrogate-assisted CMA-ES control loop.  Each cycle runs n_hat
// generations on the surrogate model (zero true evaluations), then one
// true generation, measures the model's rank error on the fresh points,
// maps that error to the next n_hat, and finally re-trains the model after
// one hyper-parameter self-adaptation step.  The error-to-n_hat map is
// linear: n_hat = round(nhat_max * max(0, tau_err - err) / tau_err).

struct SaAcmConfig {
  int g_start = 10;      // pure CMA-ES generations before the surrogate engages
  int nhat_max = 20;     // most surrogate generations per cycle
  int lambda_hyp = 20;   // candidate models per self-adaptation step
  double tau_err = 0.5;  // rank error at (or above) which n_hat becomes 0
  HyperBox box;
  bool self_adapt = true;         // false: keep fixed_hp for every training
  SurrogateHyperParams fixed_hp;  // used when self_adapt is off

  static SaAcmConfig standard(int dim, int lambda);
};

struct ArchivePoint {
  Vec x;
  double f = 0.0;
  std::int64_t seq = 0;
};

// Small evolution strategy over the normalized hyper-parameter box:
// mean + per-axis step sizes, truncation selection of the best
// ceil(lambda_hyp / 4) candidates, smoothed mean/step updates.
struct HyperOptState {
  std::array<double, 5> mean{0.5, 0.5, 0.5, 0.5, 0.5};
  std::array<double, 5> step{0.15, 0.15, 0.15, 0.15, 0.15};
};

struct SaAcmState {
  CmaState cma;
  SaAcmConfig cfg;

  // True-evaluated points only, newest last; trimmed to the training window.
  std::vector<ArchivePoint> archive;
  std::int64_t next_seq = 0;

  int nhat = 0;
  double last_rank_err = 1.0;

  HyperOptState hyper;
  std::optional<SurrogateHyperParams> current_hp;
  std::optional<SurrogateModel> model;

  std::int64_t cycles = 0;
  std::int64_t true_gens = 0;
  double best_f = std::numeric_limits<double>::infinity();
  Vec best_x;

  // Separate substreams so that surrogate bookkeeping never shifts the
  // sampling sequence: with nhat_max = 0 the sampled points are
  // bit-identical to plain CMA-ES under the same trial generator.
  Rng rng_cma;
  Rng rng_hyper;
};

SaAcmState saacm_init(const CmaParams& params, const SaAcmConfig& cfg,
                      const Vec& x0, double sigma0, Rng trial_rng);

// round(nhat_max * max(0, tau_err - err) / tau_err), clipped to
// [0, nhat_max].
int adapt_nhat(double err, const SaAcmConfig& cfg);

struct HyperStepResult {
  bool updated = false;
  SurrogateHyperParams winner;
  double winner_err = 1.0;
};

// One self-adaptation step: samples cfg.lambda_hyp candidate
// hyper-parameter vectors, trains a model per candidate on the archive
// minus the newest lambda points, scores each by rank error on those
// lambda held-out points, updates the optimizer state from the best
// quartile and returns the winner.  No-op (updated = false) while the
// archive is smaller than lambda + n_lo.
HyperStepResult hyper_step(SaAcmState& st);

enum class CycleStatus { Ok, BudgetExhausted };

// One full control cycle against `prob`.  Returns BudgetExhausted without
// consuming anything if the remaining budget cannot cover one true
// generation.  True evaluations per completed cycle: exactly lambda.
CycleStatus saacm_cycle(SaAcmState& st, Problem& prob);

// Driver: cycles until target, termination or budget.
RunResult run_saacm(Problem& prob, const CmaParams& params,
                    const SaAcmConfig& cfg, const Vec& x0, double sigma0,
                    Rng trial_rng,
                    std::int64_t max_gens = std::numeric_limits<std::int64_t>::max(),
                    std::int64_t max_run_evals = std::numeric_limits<std::int64_t>::max());

}  // namespace sacma
