#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "doctest.h"
#include "sacma/cma.hpp"
#include "sacma/errors.hpp"
#include "sacma/problem.hpp"

using namespace sacma;

namespace {

double sphere(const Vec& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

// One generation on an explicit fitness function.
void step(CmaState& st, Rng& rng, double (*f)(const Vec&)) {
  Population pop = cma_ask(st, rng);
  pop.fitness.resize(pop.x.size());
  for (size_t i = 0; i < pop.x.size(); ++i) pop.fitness[i] = f(pop.x[i]);
  cma_tell(st, pop);
}

bool states_equal(const CmaState& a, const CmaState& b) {
  if (a.sigma != b.sigma || a.gen != b.gen) return false;
  for (size_t i = 0; i < a.mean.size(); ++i)
    if (a.mean[i] != b.mean[i]) return false;
  for (int i = 0; i < a.cov.dim(); ++i)
    for (int j = 0; j < a.cov.dim(); ++j)
      if (a.cov.at(i, j) != b.cov.at(i, j)) return false;
  for (size_t i = 0; i < a.p_sigma.size(); ++i)
    if (a.p_sigma[i] != b.p_sigma[i] || a.p_c[i] != b.p_c[i]) return false;
  return true;
}

}  // namespace

TEST_SUITE("cma") {

TEST_CASE("default_params: lambda formula") {
  CHECK(default_params(10).lambda == 10);  // 4 + floor(3 ln 10)
  CHECK(default_params(2).lambda == 6);    // 4 + floor(3 ln 2)
  CHECK(default_params(5).lambda == 8);
}

TEST_CASE("default_params: weights normalized and decreasing") {
  for (int d : {2, 5, 10, 20}) {
    CmaParams p = default_params(d);
    CHECK(p.mu == p.lambda / 2);
    double sum = 0.0;
    for (int i = 0; i < p.mu; ++i) {
      sum += p.weights[i];
      CHECK(p.weights[i] > 0.0);
      if (i > 0) CHECK(p.weights[i] <= p.weights[i - 1]);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = p.mu; i < p.lambda; ++i) CHECK(p.weights[i] <= 0.0);
    CHECK(p.c1 + p.c_mu <= 1.0);
    CHECK(p.c_sigma > 0.0);
    CHECK(p.c_sigma <= 1.0);
    CHECK(p.c_c > 0.0);
    CHECK(p.c_c <= 1.0);
  }
}

TEST_CASE("default_params: invalid arguments throw") {
  CHECK_THROWS_AS(default_params(0), InvalidParam);
  CHECK_THROWS_AS(default_params(5, 1), InvalidParam);
}

TEST_CASE("init: clean starting state") {
  CmaParams p = default_params(3);
  CmaState st = cma_init(p, Vec{0, 0, 0}, 1.0);
  CHECK(st.sigma == 1.0);
  CHECK(st.gen == 0);
  for (int i = 0; i < 3; ++i) {
    CHECK(st.mean[i] == 0.0);
    CHECK(st.p_sigma[i] == 0.0);
    CHECK(st.p_c[i] == 0.0);
    for (int j = 0; j < 3; ++j)
      CHECK(st.cov.at(i, j) == (i == j ? 1.0 : 0.0));
  }
}

TEST_CASE("init: sigma0 = 0 throws") {
  CmaParams p = default_params(2);
  CHECK_THROWS_AS(cma_init(p, Vec{0, 0}, 0.0), InvalidParam);
}

TEST_CASE("ask: deterministic for equal state and rng") {
  CmaParams p = default_params(4);
  CmaState a = cma_init(p, Vec(4, 1.0), 2.0);
  CmaState b = cma_init(p, Vec(4, 1.0), 2.0);
  Rng ra(9), rb(9);
  Population pa = cma_ask(a, ra);
  Population pb = cma_ask(b, rb);
  for (int i = 0; i < p.lambda; ++i)
    for (int k = 0; k < 4; ++k) CHECK(pa.x[i][k] == pb.x[i][k]);
}

TEST_CASE("ask: degenerate sigma collapses onto the mean") {
  CmaParams p = default_params(3);
  CmaState st = cma_init(p, Vec{1, 2, 3}, 1e-300);
  Rng r(1);
  Population pop = cma_ask(st, r);
  for (const Vec& x : pop.x)
    for (int k = 0; k < 3; ++k)
      CHECK(std::fabs(x[k] - st.mean[k]) < 1e-290);
}

TEST_CASE("ask: samples follow N(m, sigma^2 I) for C = I") {
  CmaParams p = default_params(2);
  CmaState st = cma_init(p, Vec{0, 0}, 1.5);
  Rng r(55);
  const int reps = 100000 / p.lambda;
  double s11 = 0, s22 = 0, s12 = 0, n = 0;
  for (int rep = 0; rep < reps; ++rep) {
    Population pop = cma_ask(st, r);
    for (const Vec& x : pop.x) {
      s11 += x[0] * x[0];
      s22 += x[1] * x[1];
      s12 += x[0] * x[1];
      n += 1;
    }
  }
  const double v = 1.5 * 1.5;
  CHECK(std::fabs(s11 / n - v) < 0.05 * v);
  CHECK(std::fabs(s22 / n - v) < 0.05 * v);
  CHECK(std::fabs(s12 / n) < 0.05 * v);
}

TEST_CASE("tell: mean moves to weighted selection mean") {
  CmaParams p = default_params(2);
  CmaState st = cma_init(p, Vec{0, 0}, 1.0);
  Rng r(3);
  Population pop = cma_ask(st, r);
  pop.fitness.resize(p.lambda);
  for (int i = 0; i < p.lambda; ++i) pop.fitness[i] = sphere(pop.x[i]);
  // Expected: sum of w_i x_{i:lambda} over the best mu.
  std::vector<int> idx(p.lambda);
  for (int i = 0; i < p.lambda; ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return pop.fitness[a] < pop.fitness[b];
  });
  Vec want(2, 0.0);
  for (int i = 0; i < p.mu; ++i)
    for (int k = 0; k < 2; ++k) want[k] += p.weights[i] * pop.x[idx[i]][k];
  cma_tell(st, pop);
  for (int k = 0; k < 2; ++k)
    CHECK(st.mean[k] == doctest::Approx(want[k]).epsilon(1e-12));
  CHECK(st.gen == 1);
}

TEST_CASE("tell: non-finite fitness throws") {
  CmaParams p = default_params(2);
  CmaState st = cma_init(p, Vec{0, 0}, 1.0);
  Rng r(3);
  Population pop = cma_ask(st, r);
  pop.fitness.assign(p.lambda, 0.0);
  pop.fitness[1] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(cma_tell(st, pop), InvalidFitness);
  pop.fitness.resize(p.lambda - 1);
  CHECK_THROWS_AS(cma_tell(st, pop), InvalidFitness);
}

TEST_CASE("tell: rank-based invariance under increasing transforms") {
  CmaParams p = default_params(3);
  CmaState a = cma_init(p, Vec(3, 0.5), 1.0);
  CmaState b = cma_init(p, Vec(3, 0.5), 1.0);
  Rng ra(77), rb(77);
  for (int g = 0; g < 5; ++g) {
    Population pa = cma_ask(a, ra);
    Population pb = cma_ask(b, rb);
    pa.fitness.resize(p.lambda);
    pb.fitness.resize(p.lambda);
    for (int i = 0; i < p.lambda; ++i) {
      const double f = sphere(pa.x[i]);
      pa.fitness[i] = f;
      pb.fitness[i] = f * f * f + 7.0;  // strictly increasing transform
    }
    cma_tell(a, pa);
    cma_tell(b, pb);
  }
  CHECK(states_equal(a, b));
}

TEST_CASE("tell: translation invariance") {
  const Vec shift{3.0, -1.0};
  CmaParams p = default_params(2);
  CmaState a = cma_init(p, Vec{0.5, 0.5}, 1.0);
  CmaState b = cma_init(p, Vec{0.5 + shift[0], 0.5 + shift[1]}, 1.0);
  Rng ra(8), rb(8);
  for (int g = 0; g < 5; ++g) {
    Population pa = cma_ask(a, ra);
    Population pb = cma_ask(b, rb);
    pa.fitness.resize(p.lambda);
    pb.fitness.resize(p.lambda);
    for (int i = 0; i < p.lambda; ++i) {
      pa.fitness[i] = sphere(pa.x[i]);
      Vec y = pb.x[i];
      for (int k = 0; k < 2; ++k) y[k] -= shift[k];
      pb.fitness[i] = sphere(y);
    }
    cma_tell(a, pa);
    cma_tell(b, pb);
    // Exact equality is impossible in floating point ((x+s)-s != x), so
    // compare at roundoff scale.
    for (int i = 0; i < p.lambda; ++i)
      CHECK(pa.fitness[i] == doctest::Approx(pb.fitness[i]).epsilon(1e-9));
  }
  for (int k = 0; k < 2; ++k)
    CHECK(b.mean[k] - shift[k] == doctest::Approx(a.mean[k]).epsilon(1e-9));
  CHECK(b.sigma == doctest::Approx(a.sigma).epsilon(1e-9));
}

TEST_CASE("tell: covariance stays symmetric positive after active updates") {
  CmaParams p = default_params(4);  // active by default
  CmaState st = cma_init(p, Vec(4, 2.0), 1.0);
  Rng r(13);
  for (int g = 0; g < 50; ++g) step(st, r, sphere);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(st.cov.at(i, j) == st.cov.at(j, i));
  EigenDecomposition e = sym_eigen(st.cov);
  for (double d : e.d) CHECK(d > 0.0);
}

TEST_CASE("tell: sphere regression run reaches 1e-10") {
  CmaParams p = default_params(5);
  CmaState st = cma_init(p, Vec(5, 1.0), 1.0);
  Rng r(0);
  double best = std::numeric_limits<double>::infinity();
  for (int g = 0; g < 300; ++g) {
    Population pop = cma_ask(st, r);
    pop.fitness.resize(p.lambda);
    for (int i = 0; i < p.lambda; ++i) {
      pop.fitness[i] = sphere(pop.x[i]);
      best = std::min(best, pop.fitness[i]);
    }
    cma_tell(st, pop);
  }
  CHECK(best < 1e-10);
}

TEST_CASE("active update helps on a discus-like function") {
  auto discus = [](const Vec& x) {
    double s = 1e6 * x[0] * x[0];
    for (size_t i = 1; i < x.size(); ++i) s += x[i] * x[i];
    return s;
  };
  int active_better = 0;
  for (unsigned seed = 1; seed <= 15; ++seed) {
    std::int64_t evals[2];
    for (int variant = 0; variant < 2; ++variant) {
      Problem prob;
      prob.fn = discus;
      prob.max_evals = 100000;
      prob.target_f = 1e-8;
      CmaParams p = default_params(10, {}, variant == 0);
      RunResult rr = run_cma(prob, p, Vec(10, 1.0), 2.0, Rng(seed));
      evals[variant] = rr.stop == StopReason::Target ? rr.evals_used
                                                     : prob.max_evals * 2;
    }
    if (evals[0] <= evals[1]) ++active_better;
  }
  CHECK(active_better >= 9);  // >= 60% of 15 seeds
}

TEST_CASE("check_termination: fresh state reports nothing") {
  CmaParams p = default_params(2);
  CmaState st = cma_init(p, Vec{0, 0}, 1.0);
  CHECK(!cma_check_termination(st).has_value());
}

TEST_CASE("check_termination: flat fitness detected") {
  CmaParams p = default_params(2);
  CmaState st = cma_init(p, Vec{0, 0}, 1.0);
  Rng r(2);
  Population pop = cma_ask(st, r);
  pop.fitness.assign(p.lambda, 42.0);
  cma_tell(st, pop);
  auto reason = cma_check_termination(st);
  REQUIRE(reason.has_value());
  CHECK(*reason == TerminationReason::FlatFitness);
}

TEST_CASE("check_termination: TolFun after a stagnant window") {
  CmaParams p = default_params(2);
  CmaState st = cma_init(p, Vec{0, 0}, 1.0);
  Rng r(4);
  // Constant-ish fitness with a deterministic per-index tie-break spread
  // small enough to be under TolFun but not flat.
  for (size_t g = 0; g < st.hist_cap + 2; ++g) {
    Population pop = cma_ask(st, r);
    pop.fitness.resize(p.lambda);
    for (int i = 0; i < p.lambda; ++i) pop.fitness[i] = 1.0 + 1e-14 * i;
    cma_tell(st, pop);
    auto reason = cma_check_termination(st);
    if (g + 1 < st.hist_cap) {
      CHECK(!reason.has_value());
    }
    if (g + 1 >= st.hist_cap + 1) {
      REQUIRE(reason.has_value());
      CHECK(*reason == TerminationReason::TolFun);
      break;
    }
  }
}

TEST_CASE("check_termination: condition limit") {
  CmaParams p = default_params(2);
  CmaState st = cma_init(p, Vec{0, 0}, 1.0);
  Rng r(5);
  Population pop = cma_ask(st, r);
  pop.fitness.resize(p.lambda);
  for (int i = 0; i < p.lambda; ++i) pop.fitness[i] = double(i);
  cma_tell(st, pop);
  st.cov.set(0, 0, 1.0);
  st.cov.set(1, 1, 1e-15);
  st.cov.set(0, 1, 0.0);
  st.eig_dirty = true;
  auto reason = cma_check_termination(st);
  REQUIRE(reason.has_value());
  CHECK(*reason == TerminationReason::ConditionCov);
}

TEST_CASE("run_cma: stops on target and reports evals") {
  Problem prob;
  prob.fn = sphere;
  prob.max_evals = 20000;
  prob.target_f = 1e-9;
  RunResult rr = run_cma(prob, default_params(3), Vec(3, 2.0), 1.5, Rng(11));
  CHECK(rr.stop == StopReason::Target);
  CHECK(rr.best_f <= 1e-9);
  CHECK(rr.evals_used == prob.evals);
  CHECK(rr.evals_used % default_params(3).lambda == 0);
}

TEST_CASE("run_cma: respects the run budget exactly") {
  Problem prob;
  prob.fn = sphere;
  prob.max_evals = 100;  // not a multiple of lambda
  prob.target_f = -1.0;  // unreachable
  CmaParams p = default_params(4);
  RunResult rr = run_cma(prob, p, Vec(4, 1.0), 1.0, Rng(6));
  CHECK(rr.stop == StopReason::Budget);
  CHECK(prob.evals <= 100);
  CHECK(prob.evals + p.lambda > 100);
}

}
