#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sacma/restart.hpp"
#include "sacma/testbed.hpp"

namespace sacma {

// Experiment orchestration and analysis: runs algorithm x function x
// instance x dimension grids, persists per-trial records as CSV, and
// computes ERT, bootstrapped ECDF curves, rank-sum significance, speedup
// ratios and CPU-timing tables from those records.

enum class Algo { IpopAcma, BipopCma, IpopSaacm, BipopSaacm };

const char* algo_name(Algo a);
std::optional<Algo> algo_from_name(const std::string& name);

struct ExperimentConfig {
  Algo algo = Algo::IpopSaacm;
  std::vector<int> fids{1};
  std::vector<int> dims{5};
  std::vector<int> instances{1};
  std::int64_t budget_mult = 10000;  // evaluations per trial = mult * D
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string out_dir = "out";
  TargetSet targets = TargetSet::standard();

  // Inner-algorithm knobs; unset means the algorithm's own default.
  int g_start = 10;
  int nhat_max = 20;
  int lambda_hyp = 20;
  std::optional<bool> active;     // default: true except BIPOP-CMA-ES
  std::optional<bool> surrogate;  // default: per algorithm name
};

struct TrialRecord {
  std::string algo;
  int fid = 0, instance = 0, dim = 0;
  std::uint64_t seed = 0;
  std::int64_t total_evals = 0;
  double final_delta_f = 0.0;
  std::vector<std::int64_t> hits;  // per target: evals at first hit, -1 unhit
};

struct TrialSet {
  TargetSet targets = TargetSet::standard();
  std::vector<TrialRecord> rows;
};

// One trial, fully deterministic in (cfg.seed, algo, fid, instance, dim).
TrialRecord run_trial(const ExperimentConfig& cfg, int fid, int instance,
                      int dim);

// Runs the whole grid, appending rows to <out_dir>/trials.csv in grid
// order (fids outer, dims middle, instances inner) and one line per
// completed trial to <out_dir>/manifest.txt.  Trials already listed in
// the manifest are not re-run; rows present in the CSV but missing from
// the manifest (a torn previous run) are dropped before resuming.
// Returns all rows, previously existing ones included.
TrialSet run_experiment(const ExperimentConfig& cfg);

// --- analysis ---------------------------------------------------------------

// Index of the largest target <= delta_f; throws InvalidParam if delta_f
// is below the whole grid.
int target_index(const TargetSet& ts, double delta_f);

struct ErtEntry {
  std::string algo;
  int fid = 0, dim = 0;
  double delta_f = 0.0;
  double ert = std::numeric_limits<double>::infinity();
  int n_success = 0, n_trials = 0;
};

// Expected running time at the given precision: evaluations at first hit
// for successful trials plus total evaluations of unsuccessful ones,
// summed and divided by the success count (infinite without successes).
// Throws NotEnoughData if no trial matches (algo, fid, dim).
ErtEntry compute_ert(const TrialSet& ts, const std::string& algo, int fid,
                     int dim, double delta_f);

// compute_ert over every (algo, fid, dim) present, at each given precision.
std::vector<ErtEntry> ert_table(const TrialSet& ts, const Vec& delta_fs);

struct EcdfCurve {
  int group = 0, dim = 0;
  std::string algo;
  Vec x;     // evaluations / dimension, shared log grid
  Vec prop;  // proportion of bootstrapped runtimes <= x * dim
};

// Simulated-restart bootstrap over all (function, target) pairs of each
// (group, dim, algo): failures drawn with replacement contribute their
// total evaluations until a successful trial contributes its hit count.
// Pairs nobody solved contribute an infinite runtime.
std::vector<EcdfCurve> bootstrap_ecdf(const TrialSet& ts, int n_boot,
                                      Rng rng);

struct RankSumResult {
  double u = 0.0;  // Mann-Whitney U of the first sample
  double z = 0.0;
  double p = 1.0;  // two-sided, normal approximation
};

// Wilcoxon rank-sum with average ranks, tie-corrected variance and
// continuity correction.  Throws InvalidSample on an empty sample.
RankSumResult rank_sum_test(const Vec& a, const Vec& b);

// Per-trial comparison values at a precision: successful trials map to
// -1 / (evaluations to hit), unsuccessful ones to the best precision
// reached within the smallest unsuccessful-trial budget (trials that hit
// no target at all map to a common above-grid sentinel).
Vec ranksum_sample(const TrialSet& ts, const std::string& algo, int fid,
                   int dim, double delta_f);

struct SpeedupEntry {
  int fid = 0, dim = 0;
  double delta_f = 0.0;
  double ratio = 0.0;  // ERT_b / ERT_a
  bool comparable = false;
};

// Ratio table over every (fid, dim) present in both sets; entries where
// either ERT is infinite are tagged incomparable.
std::vector<SpeedupEntry> speedup_table(const TrialSet& a, const TrialSet& b,
                                        const Vec& delta_fs);

// --- timing ------------------------------------------------------------------

struct TimingPoint {
  int fid = 0, dim = 0, n_training = 0;
  double cpu_seconds_per_eval = 0.0;
  std::int64_t evals = 0;
};

// CPU cost per true evaluation of the surrogate-assisted optimizer with
// self-adaptation off and the training size fixed to the standard value
// for the dimension; each (fid, dim) point runs for about
// cpu_seconds_per_point of process CPU time.
std::vector<TimingPoint> timing_experiment(const std::vector<int>& fids,
                                           const std::vector<int>& dims,
                                           double cpu_seconds_per_point,
                                           std::uint64_t seed);

struct TrainTiming {
  int n = 0;
  double seconds = 0.0;
};

// Isolated cost of one surrogate training at each archive size.
std::vector<TrainTiming> training_benchmark(const std::vector<int>& ns,
                                            int dim, std::uint64_t seed);

// OLS slope of log(y) against log(x).
double loglog_slope(const Vec& x, const Vec& y);

// --- CSV ---------------------------------------------------------------------

// Scientific notation with 9 significant digits; infinities as "inf".
std::string csv_double(double v);

void write_trials_csv(std::ostream& os, const TrialSet& ts);
TrialSet read_trials_csv(std::istream& is);
TrialSet read_trials_csv_file(const std::string& path);
void write_ert_csv(std::ostream& os, const std::vector<ErtEntry>& entries);
void write_ecdf_csv(std::ostream& os, const std::vector<EcdfCurve>& curves);
void write_timing_csv(std::ostream& os, const std::vector<TimingPoint>& pts);

}  // namespace sacma
