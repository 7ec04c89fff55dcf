#pragma once

#include <cstdint>
#include <functional>
#include <limits>

#include "sacma/linalg.hpp"

namespace sacma {

// Optimizer-facing objective: a callable plus an evaluation budget, an
// optional absolute target value and best-so-far bookkeeping.  Every true
// evaluation an optimizer performs goes through eval(), so `evals` is an
// exact count.
struct Problem {
  std::function<double(const Vec&)> fn;
  std::int64_t max_evals = std::numeric_limits<std::int64_t>::max();
  double target_f = -std::numeric_limits<double>::infinity();

  std::int64_t evals = 0;
  double best_f = std::numeric_limits<double>::infinity();
  Vec best_x;

  double eval(const Vec& x) {
    const double v = fn(x);
    ++evals;
    if (v < best_f) {
      best_f = v;
      best_x = x;
    }
    return v;
  }

  std::int64_t remaining() const { return max_evals - evals; }
  bool target_hit() const { return best_f <= target_f; }
};

}  // namespace sacma
