#pragma once

#include <cstdint>
#include <deque>
#include <optional>

#include "sacma/linalg.hpp"
#include "sacma/problem.hpp"
#include "sacma/rng.hpp"

namespace sacma {

// (mu/mu_w, lambda)-CMA-ES with cumulative step-size adaptation, rank-one
// plus rank-mu covariance updates and an optional active (negative-weight)
// update fed by the lambda - mu worst offspring.
//
// Strategy constants (D = dimension, derived from the recombination
// weights w_i' = ln((lambda+1)/2) - ln i):
//
//   lambda   4 + floor(3 ln D)                       population size
//   mu       floor(lambda / 2)                        parents
//   w_i      w_i' / sum(w'_1..mu), i <= mu            positive weights
//   mu_eff   1 / sum(w_i^2)                           variance-effective mu
//   c_sigma  (mu_eff + 2) / (D + mu_eff + 5)
//   d_sigma  1 + 2 max(0, sqrt((mu_eff-1)/(D+1)) - 1) + c_sigma
//   c_c      (4 + mu_eff/D) / (D + 4 + 2 mu_eff/D)
//   c_1      2 / ((D + 1.3)^2 + mu_eff)
//   c_mu     min(1 - c_1, 2 (mu_eff - 2 + 1/mu_eff) / ((D+2)^2 + mu_eff))
//   chi_n    sqrt(D) (1 - 1/(4D) + 1/(21 D^2))        E||N(0, I)||
//
// Active negative weights scale w_i' (i > mu) by
//   min(1 + c_1/c_mu, 1 + 2 mu_eff_neg/(mu_eff + 2),
//       (1 - c_1 - c_mu) / (D c_mu)) / |sum w'_(mu+1..lambda)|
// and each negative update vector is renormalized to Mahalanobis length
// sqrt(D), which keeps the covariance positive definite.

struct CmaParams {
  int dim = 0;
  int lambda = 0;
  int mu = 0;
  Vec weights;  // size lambda; first mu positive (sum 1), rest <= 0
  double mu_eff = 0.0;
  double c_sigma = 0.0;
  double d_sigma = 0.0;
  double c_c = 0.0;
  double c1 = 0.0;
  double c_mu = 0.0;
  double chi_n = 0.0;
  bool active = true;
};

// Default parameter set; lambda_override replaces 4 + floor(3 ln D).
// Throws InvalidParam for dim < 1 or lambda_override < 2.
CmaParams default_params(int dim, std::optional<int> lambda_override = {},
                         bool active = true);

struct Population {
  std::vector<Vec> x;  // lambda sampled points
  std::vector<Vec> z;  // their standardized draws
  Vec fitness;         // filled by the caller before tell
};

enum class TerminationReason {
  TargetHit,
  TolFun,
  TolX,
  ConditionCov,
  FlatFitness,
  MaxGenerations,
};

struct CmaState {
  CmaParams params;
  Vec mean;
  double sigma = 1.0;
  double sigma0 = 1.0;
  SymMatrix cov;
  Vec p_sigma;
  Vec p_c;
  std::int64_t gen = 0;

  // Lazily refreshed eigendecomposition of cov.
  EigenDecomposition eig;
  bool eig_dirty = true;

  // Per-generation best/median fitness ring buffers for stagnation checks.
  // The short buffers (capacity 10 + ceil(30 D / lambda)) feed the TolFun
  // range test; the long ones feed the no-improvement test over a window
  // that grows with the generation count.
  std::deque<double> best_hist;
  std::deque<double> median_hist;
  size_t hist_cap = 0;
  std::deque<double> stag_best;
  std::deque<double> stag_median;
  double last_best = 0.0;
  double last_median = 0.0;
  bool has_last = false;
};

CmaState cma_init(const CmaParams& params, const Vec& x0, double sigma0);

// Samples lambda points x_i = m + sigma * B sqrt(d) z_i.  Refreshes the
// eigendecomposition if the covariance changed since the last call.
Population cma_ask(CmaState& st, Rng& rng);

// Rank-based distribution update.  Fitness ties are broken by sampling
// index (stable sort), so the update is a pure function of the ranks.
// When record_history is false the stagnation buffers are left untouched
// (used for generations ranked by a surrogate rather than true fitness).
// Throws InvalidFitness if the fitness vector is incomplete or non-finite.
void cma_tell(CmaState& st, const Population& pop, bool record_history = true);

// TolFun fires either when the best fitness spans less than 1e-12 over the
// short history window or when neither the per-generation best nor median
// improved across the last 120 + 30 D / lambda + 0.2 t generations (the
// stagnation test standard in restart setups; it reaps runs that drift
// without progress long before the condition limit would).  TolX 1e-12 *
// sigma0, condition number limit 1e14 (on unclamped eigenvalues),
// flat-fitness when the last generation's best equals its median.  Returns
// at most one reason; none before the first tell.
std::optional<TerminationReason> cma_check_termination(CmaState& st);

// --- single-run driver -------------------------------------------------------

enum class StopReason {
  Target,
  TolFun,
  TolX,
  Condition,
  FlatFitness,
  MaxGenerations,
  Budget,
};

StopReason stop_from_termination(TerminationReason r);

struct RunResult {
  Vec best_x;
  double best_f = std::numeric_limits<double>::infinity();
  std::int64_t evals_used = 0;
  std::int64_t gens = 0;
  StopReason stop = StopReason::Budget;
};

// Replaces non-finite fitness values (overflow on far-out points) by a
// shared worst finite stand-in.  The distribution update is rank-based,
// so this changes nothing for finite populations while keeping cma_tell's
// finiteness precondition satisfiable on unbounded objectives.
void sanitize_fitness(Vec& fitness);

// Runs plain CMA-ES on `prob` until the target is hit, an internal
// termination criterion fires, or either budget (problem-wide or
// `max_run_evals` for this run) cannot cover one more generation.
// Sampling uses the "cma" substream of trial_rng.
RunResult run_cma(Problem& prob, const CmaParams& params, const Vec& x0,
                  double sigma0, Rng trial_rng,
                  std::int64_t max_gens = std::numeric_limits<std::int64_t>::max(),
                  std::int64_t max_run_evals = std::numeric_limits<std::int64_t>::max());

}  // namespace sacma
