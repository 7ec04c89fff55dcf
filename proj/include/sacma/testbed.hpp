#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "sacma/linalg.hpp"
#include "sacma/problem.hpp"
#include "sacma/rng.hpp"

namespace sacma {

// The 24 noiseless benchmark functions in their standard instanced form:
// per (fid, instance, dim) a deterministic optimum shift, optimum value,
// and rotation matrices are generated, and evaluation is instrumented
// with counters and a first-hit log over a fixed target set.
//
// Instances are functionally equivalent to, but not bit-identical with,
// the original benchmark instance streams; determinism comes from this
// library's own seeded generator.

// Coordinate-wise oscillation transform; fixes 0 and preserves sign.
double t_osz(double v);
Vec t_osz(const Vec& x);

// Asymmetry transform: raises positive coordinates to a power that grows
// with the coordinate index; identity on non-positive coordinates.
Vec t_asy(const Vec& x, double beta);

// Diagonal of the conditioning matrix: entry i (1-based) is
// alpha^((i-1) / (2 (D-1))), so the diagonal's condition number is
// sqrt(alpha).
Vec lambda_alpha(double alpha, int dim);

// Boundary penalty: sum of max(0, |x_i| - 5)^2.
double f_pen(const Vec& x);

struct TargetSet {
  Vec dfs;  // strictly decreasing precision targets, all > 0

  // 50 log-uniform targets 10^2 down to (and including) 10^-8.
  static TargetSet standard();
};

class Objective {
 public:
  Objective(int fid, int instance, int dim);

  // Instrumented evaluation: counts the call, tracks the running best and
  // records first target hits.  Throws InvalidInput (uncounted) if x is
  // not a finite vector of the right length.
  double evaluate(const Vec& x);

  // Pure evaluation of the same function: no counters, no logging.
  double raw(const Vec& x) const;

  int fid() const { return fid_; }
  int instance() const { return instance_; }
  int dim() const { return dim_; }
  const Vec& x_opt() const { return x_opt_; }
  double f_opt() const { return f_opt_; }
  const std::optional<Matrix>& rot_r() const { return rot_r_; }
  const std::optional<Matrix>& rot_q() const { return rot_q_; }

  std::int64_t evals() const { return evals_; }
  double best_f() const { return best_f_; }

  const TargetSet& targets() const { return targets_; }
  // Evaluation count at the first hit of targets()[i], or -1 if unhit.
  const std::vector<std::int64_t>& hit_evals() const { return hit_evals_; }

  // Replaces the target set; only allowed before the first evaluation.
  void set_targets(const TargetSet& ts);

 private:
  int fid_, instance_, dim_;
  Vec x_opt_;
  double f_opt_ = 0.0;
  std::optional<Matrix> rot_r_, rot_q_;
  std::function<double(const Vec&)> raw_;

  std::int64_t evals_ = 0;
  double best_f_ = std::numeric_limits<double>::infinity();
  TargetSet targets_;
  std::vector<std::int64_t> hit_evals_;
  std::size_t next_target_ = 0;
};

// Deterministic per (fid, instance, dim); throws UnknownFunction for fid
// outside 1..24 and InvalidParam for dim < 2 or instance < 1.
Objective make_objective(int fid, int instance, int dim);

// Adapter: budgeted, target-tracked view of obj for the optimizers.
// The objective must outlive the returned problem.
Problem make_problem(Objective& obj, std::int64_t max_evals,
                     double target_df);

const char* function_name(int fid);
int function_group(int fid);          // 1..5
const char* group_name(int group);    // "separable", ...

// One row per (fid, instance, dim) with header:
// fid,name,group,dim,instance,f_opt
void metadata_csv(std::ostream& os, const std::vector<int>& fids,
                  const std::vector<int>& instances,
                  const std::vector<int>& dims);

}  // namespace sacma
