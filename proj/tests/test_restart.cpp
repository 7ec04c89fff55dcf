#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "sacma/errors.hpp"
#include "sacma/restart.hpp"

using namespace sacma;

namespace {

double sphere(const Vec& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

struct MockCall {
  int lambda;
  double sigma0;
  std::int64_t cap;
  Vec x0;
};

// Inner runner that consumes min(consume, cap, remaining) evaluations and
// never reaches the target; records every call.
InnerRunner mock_runner(std::vector<MockCall>& calls, std::int64_t consume) {
  return [&calls, consume](Problem& prob, int lambda, const Vec& x0,
                           double sigma0, Rng, std::int64_t cap) {
    calls.push_back({lambda, sigma0, cap, x0});
    std::int64_t n = std::min(consume, cap);
    n = std::min(n, prob.remaining());
    for (std::int64_t i = 0; i < n; ++i) prob.eval(Vec(x0.size(), 1e9));
    RunResult rr;
    rr.evals_used = n;
    rr.best_f = 1e9;
    rr.stop = StopReason::Budget;
    return rr;
  };
}

}  // namespace

TEST_SUITE("restart") {

TEST_CASE("ipop: population doubles per restart") {
  std::vector<MockCall> calls;
  Problem prob;
  prob.fn = sphere;
  prob.max_evals = 100000;
  prob.target_f = -1.0;
  RestartPolicy policy;
  policy.kind = RestartKind::Ipop;
  policy.base_lambda = 10;
  policy.max_restarts = 3;
  RestartResult res =
      run_restarts(prob, 2, policy, mock_runner(calls, 1000), Rng(1));
  REQUIRE(calls.size() == 4);
  CHECK(calls[0].lambda == 10);
  CHECK(calls[1].lambda == 20);
  CHECK(calls[2].lambda == 40);
  CHECK(calls[3].lambda == 80);
  for (const MockCall& c : calls) {
    CHECK(c.sigma0 == policy.sigma0);
    CHECK(c.cap == std::numeric_limits<std::int64_t>::max());
    for (double v : c.x0) {
      CHECK(v >= policy.box_lo);
      CHECK(v <= policy.box_hi);
    }
  }
  CHECK(res.ledger.runs.size() == 4);
  for (const RunRecord& r : res.ledger.runs) CHECK(r.regime == Regime::None);
  CHECK(res.ledger.total_evals() == prob.evals);
  CHECK(!res.target_hit);
}

TEST_CASE("ipop: zero budget yields an empty ledger") {
  std::vector<MockCall> calls;
  Problem prob;
  prob.fn = sphere;
  prob.max_evals = 0;
  prob.target_f = -1.0;
  RestartPolicy policy;
  policy.base_lambda = 6;
  RestartResult res =
      run_restarts(prob, 2, policy, mock_runner(calls, 100), Rng(1));
  CHECK(calls.empty());
  CHECK(res.ledger.runs.empty());
  CHECK(prob.evals == 0);
}

TEST_CASE("ipop: max_restarts = 0 allows exactly one run") {
  std::vector<MockCall> calls;
  Problem prob;
  prob.fn = sphere;
  prob.max_evals = 100000;
  prob.target_f = -1.0;
  RestartPolicy policy;
  policy.base_lambda = 8;
  policy.max_restarts = 0;
  run_restarts(prob, 2, policy, mock_runner(calls, 500), Rng(1));
  CHECK(calls.size() == 1);
}

TEST_CASE("bipop: regime alternation follows the eval ledger") {
  // Large runs consume 1000, small runs are capped at half the last large
  // run (500 here), so each large run is followed by two small runs.
  std::vector<MockCall> calls;
  Problem prob;
  prob.fn = sphere;
  prob.max_evals = 100000;
  prob.target_f = -1.0;
  RestartPolicy policy;
  policy.kind = RestartKind::Bipop;
  policy.base_lambda = 10;
  policy.max_restarts = 7;
  RestartResult res =
      run_restarts(prob, 2, policy, mock_runner(calls, 1000), Rng(7));

  const std::vector<Regime> want = {Regime::None,  Regime::Large, Regime::Small,
                                    Regime::Small, Regime::Large, Regime::Small,
                                    Regime::Small, Regime::Large};
  REQUIRE(res.ledger.runs.size() == want.size());
  for (size_t i = 0; i < want.size(); ++i)
    CHECK(res.ledger.runs[i].regime == want[i]);

  // Large-regime populations double: 20, 40, 80.
  CHECK(res.ledger.runs[1].lambda == 20);
  CHECK(res.ledger.runs[4].lambda == 40);
  CHECK(res.ledger.runs[7].lambda == 80);
  CHECK(res.ledger.runs[0].lambda == 10);

  // Small runs: capped at half the last large run, shrunk sigma, population
  // between base and the current large population.
  for (size_t i : {size_t(2), size_t(3), size_t(5), size_t(6)}) {
    CHECK(calls[i].cap == 500);
    CHECK(calls[i].sigma0 <= policy.sigma0);
    CHECK(calls[i].sigma0 >= policy.sigma0 * 0.01 * 0.999);
    CHECK(res.ledger.runs[i].lambda >= policy.base_lambda);
  }
  CHECK(res.ledger.runs[2].lambda <= 20);
  CHECK(res.ledger.runs[5].lambda <= 40);
  CHECK(res.ledger.runs[6].lambda <= 40);

  CHECK(res.ledger.large_evals == 2000 + res.ledger.runs[7].evals);
  CHECK(res.ledger.small_evals == 2000);
  CHECK(res.ledger.total_evals() == prob.evals);
}

TEST_CASE("bipop: small-run parameters replay from the pinned draw order") {
  std::vector<MockCall> calls;
  Problem prob;
  prob.fn = sphere;
  prob.max_evals = 8000;
  prob.target_f = -1.0;
  RestartPolicy policy;
  policy.kind = RestartKind::Bipop;
  policy.base_lambda = 10;
  const unsigned seed = 1234;
  RestartResult res =
      run_restarts(prob, 3, policy, mock_runner(calls, 1000), Rng(seed));

  // Replay: per run, a small regime draws u then u'; every run then draws
  // dim coordinates for the initial mean, all from the "restart" stream.
  Rng replay = Rng(seed).stream("restart");
  int lambda_large = policy.base_lambda;
  for (size_t i = 0; i < res.ledger.runs.size(); ++i) {
    const RunRecord& r = res.ledger.runs[i];
    if (r.regime == Regime::Large) lambda_large *= 2;
    if (r.regime == Regime::Small) {
      const double u = replay.uniform01();
      const double u2 = replay.uniform01();
      const int lam = std::max(
          2, int(std::floor(policy.base_lambda *
                            std::pow(double(lambda_large) / policy.base_lambda,
                                     u * u))));
      CHECK(r.lambda == lam);
      CHECK(r.sigma0 == policy.sigma0 * std::pow(10.0, -2.0 * u2));
    }
    Vec x0(3);
    for (int k = 0; k < 3; ++k)
      x0[k] = replay.uniform(policy.box_lo, policy.box_hi);
    for (int k = 0; k < 3; ++k) CHECK(calls[i].x0[k] == x0[k]);
  }
}

TEST_CASE("bipop: ties between the regimes go to the large one") {
  // A runner that consumes nothing keeps the two regime ledgers tied at
  // zero, so every restart must pick the large regime and keep doubling.
  std::vector<MockCall> calls;
  Problem prob;
  prob.fn = sphere;
  prob.max_evals = 1000;
  prob.target_f = -1.0;
  RestartPolicy policy;
  policy.kind = RestartKind::Bipop;
  policy.base_lambda = 10;
  policy.max_restarts = 3;
  RestartResult res =
      run_restarts(prob, 2, policy, mock_runner(calls, 0), Rng(3));
  REQUIRE(res.ledger.runs.size() == 4);
  CHECK(res.ledger.runs[0].regime == Regime::None);
  for (size_t i = 1; i < 4; ++i) {
    CHECK(res.ledger.runs[i].regime == Regime::Large);
    CHECK(res.ledger.runs[i].lambda == 10 << i);
  }
}

TEST_CASE("run_rng: distinct per run index") {
  // Two identical policies, same seed: the k-th run must see the same rng
  // regardless of what the runner did with previous ones (streams are
  // derived from the run index, not from consumption).
  std::vector<Rng> seen_a, seen_b;
  auto capture = [](std::vector<Rng>& sink, std::int64_t consume) {
    return InnerRunner([&sink, consume](Problem& prob, int, const Vec& x0,
                                        double, Rng rng, std::int64_t cap) {
      sink.push_back(rng);
      std::int64_t n = std::min({consume, cap, prob.remaining()});
      for (std::int64_t i = 0; i < n; ++i) prob.eval(Vec(x0.size(), 1e9));
      RunResult rr;
      rr.evals_used = n;
      rr.best_f = 1e9;
      rr.stop = StopReason::Budget;
      return rr;
    });
  };
  RestartPolicy policy;
  policy.base_lambda = 5;
  policy.max_restarts = 2;
  Problem pa;
  pa.fn = sphere;
  pa.max_evals = 1000;
  pa.target_f = -1.0;
  Problem pb = pa;
  run_restarts(pa, 2, policy, capture(seen_a, 100), Rng(77));
  run_restarts(pb, 2, policy, capture(seen_b, 300), Rng(77));
  REQUIRE(seen_a.size() == 3);
  REQUIRE(seen_b.size() == 3);
  for (size_t i = 0; i < 3; ++i)
    CHECK(seen_a[i].next_u64() == seen_b[i].next_u64());
  // Different runs get different streams.
  Rng a0 = seen_a[0], a1 = seen_a[1];
  CHECK(a0.next_u64() != a1.next_u64());
}

TEST_CASE("restart: target hit stops immediately") {
  // Real inner runner on a sphere with a generous budget: first run hits.
  Problem prob;
  prob.fn = sphere;
  prob.max_evals = 50000;
  prob.target_f = 1e-8;
  RestartPolicy policy;
  AlgoSettings settings;
  settings.surrogate = false;
  RestartResult res =
      run_restarts(prob, 3, policy, make_runner(3, settings), Rng(5));
  CHECK(res.target_hit);
  CHECK(res.ledger.runs.size() == 1);
  CHECK(res.best_f <= 1e-8);
  CHECK(res.ledger.runs[0].stop == StopReason::Target);
}

TEST_CASE("restart: flat fitness forces repeated restarts") {
  Problem prob;
  prob.fn = [](const Vec&) { return 0.0; };
  prob.max_evals = 95;
  prob.target_f = -1.0;
  RestartPolicy policy;
  policy.kind = RestartKind::Ipop;
  policy.base_lambda = 6;
  AlgoSettings settings;
  settings.surrogate = false;
  RestartResult res =
      run_restarts(prob, 2, policy, make_runner(2, settings), Rng(9));
  // Each run stops with flat fitness after one generation: 6+12+24+48 = 90
  // evaluations, then lambda = 96 exceeds the remaining budget.
  REQUIRE(res.ledger.runs.size() == 4);
  for (size_t i = 0; i < 4; ++i) {
    CHECK(res.ledger.runs[i].lambda == 6 << i);
    CHECK(res.ledger.runs[i].evals == 6 << i);
    CHECK(res.ledger.runs[i].stop == StopReason::FlatFitness);
  }
  CHECK(prob.evals == 90);
  CHECK(!res.target_hit);
}

TEST_CASE("restart: invalid arguments throw") {
  Problem prob;
  prob.fn = sphere;
  RestartPolicy policy;
  std::vector<MockCall> calls;
  CHECK_THROWS_AS(run_restarts(prob, 0, policy, mock_runner(calls, 1), Rng(1)),
                  InvalidParam);
  policy.base_lambda = 1;
  CHECK_THROWS_AS(run_restarts(prob, 2, policy, mock_runner(calls, 1), Rng(1)),
                  InvalidParam);
}

}
