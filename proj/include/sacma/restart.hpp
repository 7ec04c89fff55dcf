#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "sacma/cma.hpp"
#include "sacma/saacm.hpp"

namespace sacma {

// Restart wrappers around an inner optimizer run.  IPOP doubles the
// population size on every restart.  BIPOP alternates a doubling
// large-population regime with a randomized small-population regime,
// always continuing the regime that has consumed fewer evaluations
// (ties go to the large regime; the first run belongs to neither).

enum class RestartKind { Ipop, Bipop };

struct RestartPolicy {
  RestartKind kind = RestartKind::Ipop;
  int base_lambda = 0;  // 0: default population size for the dimension
  std::int64_t max_restarts = std::numeric_limits<std::int64_t>::max();
  double sigma0 = 2.0;
  double box_lo = -4.0, box_hi = 4.0;  // initial-mean sampling box
};

enum class Regime { None, Large, Small };  // None: first BIPOP run, all IPOP runs

struct RunRecord {
  int lambda = 0;
  double sigma0 = 0.0;
  std::int64_t evals = 0;
  double best_f = 0.0;
  StopReason stop = StopReason::Budget;
  Regime regime = Regime::None;
};

struct RestartLedger {
  std::vector<RunRecord> runs;
  std::int64_t large_evals = 0;  // BIPOP large-regime total
  std::int64_t small_evals = 0;  // BIPOP small-regime total

  std::int64_t total_evals() const;
};

struct RestartResult {
  Vec best_x;
  double best_f = std::numeric_limits<double>::infinity();
  bool target_hit = false;
  RestartLedger ledger;
};

// Runs one inner optimization: fresh state at the given population size,
// start point and step size, consuming at most max_run_evals evaluations
// of prob (prob's own budget still binds).
using InnerRunner =
    std::function<RunResult(Problem& prob, int lambda, const Vec& x0,
                            double sigma0, Rng run_rng,
                            std::int64_t max_run_evals)>;

// Inner-algorithm selection for the benchmarked variants.
struct AlgoSettings {
  bool surrogate = true;   // false: plain CMA-ES inner runs
  bool active = true;      // active (negative-weight) covariance update
  bool self_adapt = true;  // surrogate hyper-parameter adaptation
  int g_start = 10;
  int nhat_max = 20;
  int lambda_hyp = 20;
  double tau_err = 0.5;
  std::optional<SurrogateHyperParams> fixed_hp;  // used when !self_adapt
};

InnerRunner make_runner(int dim, const AlgoSettings& settings);

// Restart driver; stops on target, exhausted budget, or max restarts.
// Run k of IPOP uses lambda = base * 2^k.  Per-(re)start the initial
// mean is uniform in the sampling box.
RestartResult run_restarts(Problem& prob, int dim, const RestartPolicy& policy,
                           const InnerRunner& runner, Rng trial_rng);

}  // namespace sacma
