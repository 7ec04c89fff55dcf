#include "sacma/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

#include "sacma/errors.hpp"
#include "sacma/surrogate.hpp"

namespace fs = std::filesystem;

namespace sacma {

const char* algo_name(Algo a) {
  switch (a) {
    case Algo::IpopAcma: return "ipop-acma";
    case Algo::BipopCma: return "bipop-cma";
    case Algo::IpopSaacm: return "ipop-saacm";
    case Algo::BipopSaacm: return "bipop-saacm";
  }
  throw InvalidParam("algo_name: bad enum value");
}

std::optional<Algo> algo_from_name(const std::string& name) {
  if (name == "ipop-acma") return Algo::IpopAcma;
  if (name == "bipop-cma") return Algo::BipopCma;
  if (name == "ipop-saacm") return Algo::IpopSaacm;
  if (name == "bipop-saacm") return Algo::BipopSaacm;
  return std::nullopt;
}

namespace {

void algo_defaults(Algo a, RestartPolicy& pol, AlgoSettings& s) {
  switch (a) {
    case Algo::IpopAcma:
      pol.kind = RestartKind::Ipop;
      s.surrogate = false;
      s.active = true;
      break;
    case Algo::BipopCma:
      pol.kind = RestartKind::Bipop;
      s.surrogate = false;
      s.active = false;
      break;
    case Algo::IpopSaacm:
      pol.kind = RestartKind::Ipop;
      s.surrogate = true;
      s.active = true;
      break;
    case Algo::BipopSaacm:
      pol.kind = RestartKind::Bipop;
      s.surrogate = true;
      s.active = true;
      break;
  }
}

std::string trial_key(const std::string& algo, int fid, int inst, int dim) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s,%d,%d,%d", algo.c_str(), fid, inst, dim);
  return buf;
}

// Column labels double as the persisted target grid (read_trials_csv
// recovers it from the header), so they carry full precision: a resumed
// run must accept the grid of its own previous output.
std::string target_label(double df) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", df);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

void write_trial_row(std::ostream& os, const TargetSet& targets,
                     const TrialRecord& r) {
  os << r.algo << ',' << r.fid << ',' << r.instance << ',' << r.dim << ','
     << r.seed << ',' << r.total_evals << ',' << csv_double(r.final_delta_f);
  for (size_t t = 0; t < targets.dfs.size(); ++t) {
    os << ',';
    if (t < r.hits.size() && r.hits[t] >= 0) os << r.hits[t];
  }
  os << '\n';
}

}  // namespace

TrialRecord run_trial(const ExperimentConfig& cfg, int fid, int instance,
                      int dim) {
  Objective obj = make_objective(fid, instance, dim);
  obj.set_targets(cfg.targets);
  Problem prob =
      make_problem(obj, cfg.budget_mult * dim, cfg.targets.dfs.back());

  const std::string name = algo_name(cfg.algo);
  const Rng trial_rng = Rng(cfg.seed)
                            .stream("trial")
                            .stream(name)
                            .stream(std::uint64_t(fid))
                            .stream(std::uint64_t(instance))
                            .stream(std::uint64_t(dim));

  RestartPolicy pol;
  AlgoSettings s;
  algo_defaults(cfg.algo, pol, s);
  if (cfg.active) s.active = *cfg.active;
  if (cfg.surrogate) s.surrogate = *cfg.surrogate;
  s.g_start = cfg.g_start;
  s.nhat_max = cfg.nhat_max;
  s.lambda_hyp = cfg.lambda_hyp;

  run_restarts(prob, dim, pol, make_runner(dim, s), trial_rng);

  TrialRecord rec;
  rec.algo = name;
  rec.fid = fid;
  rec.instance = instance;
  rec.dim = dim;
  rec.seed = trial_rng.key();
  rec.total_evals = obj.evals();
  rec.final_delta_f = obj.best_f() - obj.f_opt();
  rec.hits = obj.hit_evals();
  return rec;
}

TrialSet run_experiment(const ExperimentConfig& cfg) {
  if (cfg.budget_mult < 1)
    throw InvalidParam("run_experiment: budget multiplier must be >= 1");
  if (cfg.fids.empty() || cfg.dims.empty() || cfg.instances.empty())
    throw InvalidParam("run_experiment: empty function/dimension/instance list");

  fs::create_directories(cfg.out_dir);
  const std::string trials_path = cfg.out_dir + "/trials.csv";
  const std::string manifest_path = cfg.out_dir + "/manifest.txt";

  std::set<std::string> done;
  {
    std::ifstream mf(manifest_path);
    std::string line;
    while (std::getline(mf, line)) {
      while (!line.empty() && (line.back() == '\r' || line.back() == '\n'))
        line.pop_back();
      if (!line.empty()) done.insert(line);
    }
  }

  TrialSet all;
  all.targets = cfg.targets;
  if (fs::exists(trials_path)) {
    TrialSet prev = read_trials_csv_file(trials_path);
    if (prev.targets.dfs.size() != cfg.targets.dfs.size())
      throw InvalidInput("run_experiment: existing trials.csv target grid differs");
    for (size_t i = 0; i < cfg.targets.dfs.size(); ++i)
      if (std::fabs(prev.targets.dfs[i] - cfg.targets.dfs[i]) >
          1e-6 * cfg.targets.dfs[i])
        throw InvalidInput("run_experiment: existing trials.csv target grid differs");
    // Keep only rows the manifest acknowledges (drops rows torn by a kill
    // between the row append and the manifest append).
    size_t kept = 0;
    for (auto& r : prev.rows)
      if (done.count(trial_key(r.algo, r.fid, r.instance, r.dim)))
        prev.rows[kept++] = std::move(r);
    const bool dropped = kept != prev.rows.size();
    prev.rows.resize(kept);
    if (dropped) {
      const std::string tmp = trials_path + ".tmp";
      std::ofstream tf(tmp, std::ios::trunc);
      write_trials_csv(tf, prev);
      tf.flush();
      if (!tf) throw Error("run_experiment: rewrite of trials.csv failed");
      tf.close();
      fs::rename(tmp, trials_path);
    }
    all.rows = std::move(prev.rows);
  } else {
    done.clear();  // manifest without data: start from scratch
    std::ofstream(manifest_path, std::ios::trunc).flush();
  }

  struct Item {
    int fid, dim, inst;
  };
  std::vector<Item> pending;
  const std::string name = algo_name(cfg.algo);
  for (int fid : cfg.fids)
    for (int dim : cfg.dims)
      for (int inst : cfg.instances)
        if (!done.count(trial_key(name, fid, inst, dim)))
          pending.push_back({fid, dim, inst});

  const bool fresh = !fs::exists(trials_path) || fs::file_size(trials_path) == 0;
  std::ofstream tf(trials_path, std::ios::app);
  std::ofstream mf(manifest_path, std::ios::app);
  if (!tf || !mf) throw Error("run_experiment: cannot open output files");
  if (fresh) {
    tf << "algorithm,fid,instance,D,seed,total_evals,final_delta_f";
    for (double df : cfg.targets.dfs) tf << ",hit_" << target_label(df);
    tf << '\n';
  }

  const size_t n = pending.size();
  std::vector<std::optional<TrialRecord>> slots(n);
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<size_t> next{0};
  // A throwing trial must surface in the caller, not terminate the process:
  // workers park the first exception here and wind down.
  std::exception_ptr worker_error;
  auto work = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        TrialRecord r = run_trial(cfg, pending[i].fid, pending[i].inst,
                                  pending[i].dim);
        std::lock_guard<std::mutex> lk(mu);
        slots[i] = std::move(r);
      } catch (...) {
        std::lock_guard<std::mutex> lk(mu);
        if (!worker_error) worker_error = std::current_exception();
        next.store(n);  // stop handing out further work
      }
      cv.notify_all();
    }
  };

  const size_t nthreads =
      std::min(n, size_t(std::max(1, cfg.jobs)));
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (size_t k = 0; k < nthreads; ++k) pool.emplace_back(work);

  for (size_t i = 0; i < n; ++i) {
    {
      std::unique_lock<std::mutex> lk(mu);
      cv.wait(lk, [&] { return slots[i].has_value() || worker_error; });
      if (worker_error) {
        lk.unlock();
        for (auto& th : pool) th.join();
        std::rethrow_exception(worker_error);
      }
    }
    TrialRecord& r = *slots[i];
    write_trial_row(tf, cfg.targets, r);
    tf.flush();
    if (!tf) {
      for (auto& th : pool) th.join();
      throw Error("run_experiment: trials.csv write failed");
    }
    mf << trial_key(r.algo, r.fid, r.instance, r.dim) << '\n';
    mf.flush();
    all.rows.push_back(std::move(r));
    slots[i].reset();
  }
  for (auto& th : pool) th.join();
  return all;
}

// --- analysis ---------------------------------------------------------------

int target_index(const TargetSet& ts, double delta_f) {
  for (size_t i = 0; i < ts.dfs.size(); ++i)
    if (ts.dfs[i] <= delta_f * (1.0 + 1e-9)) return int(i);
  throw InvalidParam("target_index: precision below the target grid");
}

ErtEntry compute_ert(const TrialSet& ts, const std::string& algo, int fid,
                     int dim, double delta_f) {
  const int ti = target_index(ts.targets, delta_f);
  ErtEntry e;
  e.algo = algo;
  e.fid = fid;
  e.dim = dim;
  e.delta_f = ts.targets.dfs[ti];
  std::int64_t sum = 0;
  for (const auto& r : ts.rows) {
    if (r.algo != algo || r.fid != fid || r.dim != dim) continue;
    ++e.n_trials;
    if (size_t(ti) < r.hits.size() && r.hits[ti] >= 0) {
      ++e.n_success;
      sum += r.hits[ti];
    } else {
      sum += r.total_evals;
    }
  }
  if (e.n_trials == 0)
    throw NotEnoughData("compute_ert: no trials for this (algo, fid, dim)");
  if (e.n_success > 0) e.ert = double(sum) / e.n_success;
  return e;
}

std::vector<ErtEntry> ert_table(const TrialSet& ts, const Vec& delta_fs) {
  std::set<std::tuple<std::string, int, int>> keys;
  for (const auto& r : ts.rows) keys.insert({r.algo, r.fid, r.dim});
  std::vector<ErtEntry> out;
  for (const auto& [algo, fid, dim] : keys)
    for (double df : delta_fs)
      out.push_back(compute_ert(ts, algo, fid, dim, df));
  return out;
}

std::vector<EcdfCurve> bootstrap_ecdf(const TrialSet& ts, int n_boot,
                                      Rng rng) {
  if (ts.rows.empty()) throw NotEnoughData("bootstrap_ecdf: no trials");
  if (n_boot < 1) throw InvalidParam("bootstrap_ecdf: n_boot must be >= 1");

  double xmax = 10.0;
  for (const auto& r : ts.rows)
    xmax = std::max(xmax, double(r.total_evals) / r.dim);
  const int npts = 101;
  Vec grid(npts);
  for (int j = 0; j < npts; ++j)
    grid[j] = std::pow(10.0, std::log10(xmax) * j / (npts - 1));

  // (group, dim, algo) -> set of fids present
  std::map<std::tuple<int, int, std::string>, std::set<int>> curves;
  for (const auto& r : ts.rows)
    curves[{function_group(r.fid), r.dim, r.algo}].insert(r.fid);

  std::vector<EcdfCurve> out;
  for (const auto& [key, fids] : curves) {
    const auto& [group, dim, algo] = key;
    std::vector<double> runtimes;
    runtimes.reserve(fids.size() * ts.targets.dfs.size() * size_t(n_boot));
    for (int fid : fids) {
      std::vector<const TrialRecord*> rows;
      for (const auto& r : ts.rows)
        if (r.algo == algo && r.fid == fid && r.dim == dim)
          rows.push_back(&r);
      for (size_t t = 0; t < ts.targets.dfs.size(); ++t) {
        bool any = false;
        for (const auto* r : rows)
          if (t < r->hits.size() && r->hits[t] >= 0) any = true;
        if (!any) {
          runtimes.insert(runtimes.end(), size_t(n_boot),
                          std::numeric_limits<double>::infinity());
          continue;
        }
        Rng sr = rng.stream(algo)
                     .stream(std::uint64_t(dim))
                     .stream(std::uint64_t(fid))
                     .stream(std::uint64_t(t));
        for (int b = 0; b < n_boot; ++b) {
          double sum = 0.0;
          for (;;) {
            const TrialRecord* r = rows[sr.below(rows.size())];
            if (t < r->hits.size() && r->hits[t] >= 0) {
              sum += double(r->hits[t]);
              break;
            }
            sum += double(r->total_evals);
          }
          runtimes.push_back(sum);
        }
      }
    }
    std::sort(runtimes.begin(), runtimes.end());
    EcdfCurve c;
    c.group = group;
    c.dim = dim;
    c.algo = algo;
    c.x = grid;
    c.prop.resize(npts);
    for (int j = 0; j < npts; ++j) {
      const auto it = std::upper_bound(runtimes.begin(), runtimes.end(),
                                       grid[j] * dim);
      c.prop[j] = double(it - runtimes.begin()) / runtimes.size();
    }
    out.push_back(std::move(c));
  }
  return out;
}

RankSumResult rank_sum_test(const Vec& a, const Vec& b) {
  if (a.empty() || b.empty())
    throw InvalidSample("rank_sum_test: empty sample");
  const size_t n1 = a.size(), n2 = b.size(), n = n1 + n2;

  struct P {
    double v;
    int grp;
  };
  std::vector<P> all;
  all.reserve(n);
  for (double v : a) all.push_back({v, 0});
  for (double v : b) all.push_back({v, 1});
  std::stable_sort(all.begin(), all.end(),
                   [](const P& x, const P& y) { return x.v < y.v; });

  double r1 = 0.0;     // rank sum of sample a, average ranks for ties
  double tie_sum = 0;  // sum of t^3 - t over tie groups
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j < n && all[j].v == all[i].v) ++j;
    const double rank = 0.5 * double(i + 1 + j);
    for (size_t k = i; k < j; ++k)
      if (all[k].grp == 0) r1 += rank;
    const double t = double(j - i);
    if (t > 1) tie_sum += t * t * t - t;
    i = j;
  }

  RankSumResult res;
  res.u = r1 - double(n1) * (n1 + 1) / 2.0;
  const double mu = double(n1) * n2 / 2.0;
  const double var =
      (double(n1) * n2 / 12.0) *
      (double(n + 1) - tie_sum / (double(n) * (n - 1)));
  if (var <= 0.0) return res;  // all values tied: z = 0, p = 1
  const double ad = std::fabs(res.u - mu);
  res.z = ad > 0.5 ? (ad - 0.5) / std::sqrt(var) : 0.0;
  res.p = std::min(1.0, std::erfc(res.z / std::sqrt(2.0)));
  return res;
}

Vec ranksum_sample(const TrialSet& ts, const std::string& algo, int fid,
                   int dim, double delta_f) {
  const int ti = target_index(ts.targets, delta_f);
  std::vector<const TrialRecord*> rows;
  for (const auto& r : ts.rows)
    if (r.algo == algo && r.fid == fid && r.dim == dim) rows.push_back(&r);
  if (rows.empty())
    throw NotEnoughData("ranksum_sample: no trials for this (algo, fid, dim)");

  std::int64_t cutoff = std::numeric_limits<std::int64_t>::max();
  for (const auto* r : rows)
    if (!(size_t(ti) < r->hits.size() && r->hits[ti] >= 0))
      cutoff = std::min(cutoff, r->total_evals);

  Vec out;
  out.reserve(rows.size());
  for (const auto* r : rows) {
    if (size_t(ti) < r->hits.size() && r->hits[ti] >= 0) {
      out.push_back(-1.0 / double(r->hits[ti]));
    } else {
      double best = 10.0 * ts.targets.dfs.front();  // above-grid sentinel
      for (size_t k = 0; k < r->hits.size(); ++k)
        if (r->hits[k] >= 0 && r->hits[k] <= cutoff)
          best = ts.targets.dfs[k];
      out.push_back(best);
    }
  }
  return out;
}

std::vector<SpeedupEntry> speedup_table(const TrialSet& a, const TrialSet& b,
                                        const Vec& delta_fs) {
  if (a.rows.empty() || b.rows.empty())
    throw NotEnoughData("speedup_table: empty record set");
  const std::string algo_a = a.rows.front().algo;
  const std::string algo_b = b.rows.front().algo;
  std::set<std::pair<int, int>> ka, kb;
  for (const auto& r : a.rows) ka.insert({r.fid, r.dim});
  for (const auto& r : b.rows) kb.insert({r.fid, r.dim});

  std::vector<SpeedupEntry> out;
  for (const auto& [fid, dim] : ka) {
    if (!kb.count({fid, dim})) continue;
    for (double df : delta_fs) {
      const ErtEntry ea = compute_ert(a, algo_a, fid, dim, df);
      const ErtEntry eb = compute_ert(b, algo_b, fid, dim, df);
      SpeedupEntry s;
      s.fid = fid;
      s.dim = dim;
      s.delta_f = ea.delta_f;
      s.comparable = std::isfinite(ea.ert) && std::isfinite(eb.ert) &&
                     ea.ert > 0.0;
      s.ratio = s.comparable ? eb.ert / ea.ert : 0.0;
      out.push_back(s);
    }
  }
  return out;
}

// --- timing ------------------------------------------------------------------

namespace {

double cpu_seconds() { return double(std::clock()) / CLOCKS_PER_SEC; }

}  // namespace

std::vector<TimingPoint> timing_experiment(const std::vector<int>& fids,
                                           const std::vector<int>& dims,
                                           double cpu_seconds_per_point,
                                           std::uint64_t seed) {
  std::vector<TimingPoint> out;
  for (int dim : dims) {
    for (int fid : fids) {
      Objective obj = make_objective(fid, 1, dim);
      // Target below the optimum: the run never stops on precision.
      Problem prob =
          make_problem(obj, std::numeric_limits<std::int64_t>::max() / 4, -1.0);
      const CmaParams params = default_params(dim);
      Rng trng = Rng(seed)
                     .stream("timing")
                     .stream(std::uint64_t(fid))
                     .stream(std::uint64_t(dim));
      const double t0 = cpu_seconds();
      std::uint64_t run = 0;
      while (cpu_seconds() - t0 < cpu_seconds_per_point) {
        SaAcmConfig cfg = SaAcmConfig::standard(dim, params.lambda);
        cfg.self_adapt = false;
        Rng run_rng = trng.stream(run++);
        Rng xr = run_rng.stream("x0");
        Vec x0(dim);
        for (int i = 0; i < dim; ++i) x0[i] = xr.uniform(-4.0, 4.0);
        SaAcmState st = saacm_init(params, cfg, x0, 2.0, run_rng);
        while (cpu_seconds() - t0 < cpu_seconds_per_point) {
          if (saacm_cycle(st, prob) != CycleStatus::Ok) break;
          if (cma_check_termination(st.cma)) break;
        }
      }
      TimingPoint tp;
      tp.fid = fid;
      tp.dim = dim;
      tp.n_training = standard_train_size(dim);
      tp.evals = obj.evals();
      tp.cpu_seconds_per_eval =
          obj.evals() > 0 ? (cpu_seconds() - t0) / obj.evals() : 0.0;
      out.push_back(tp);
    }
  }
  return out;
}

std::vector<TrainTiming> training_benchmark(const std::vector<int>& ns,
                                            int dim, std::uint64_t seed) {
  std::vector<TrainTiming> out;
  const Rng base(seed);
  for (int n : ns) {
    if (n < 4) throw InvalidParam("training_benchmark: n must be >= 4");
    Rng r = base.stream(std::uint64_t(n));
    std::vector<TrainPoint> pts(n);
    std::vector<Vec> xs(n);
    for (int i = 0; i < n; ++i) {
      Vec x(dim);
      for (int k = 0; k < dim; ++k) x[k] = r.uniform(-4.0, 4.0);
      double f = 0.0;
      for (int k = 0; k < dim; ++k) f += x[k] * x[k];
      pts[i] = {x, f, i};
      xs[i] = std::move(x);
    }
    SurrogateHyperParams hp;
    hp.n_train = n;
    const KernelTransform kt =
        build_transform(SymMatrix::identity(dim), xs, hp.sigma_factor);
    train(pts, hp, kt);  // warm-up
    int reps = 0;
    const double t0 = cpu_seconds();
    double el = 0.0;
    do {
      train(pts, hp, kt);
      ++reps;
      el = cpu_seconds() - t0;
    } while (el < 0.2 && reps < 64);
    out.push_back({n, el / reps});
  }
  return out;
}

double loglog_slope(const Vec& x, const Vec& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InvalidParam("loglog_slope: need two samples of equal size");
  const size_t n = x.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw InvalidParam("loglog_slope: values must be positive");
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y[i]) - my);
  }
  if (sxx <= 0.0) throw InvalidParam("loglog_slope: degenerate x values");
  return sxy / sxx;
}

// --- CSV ---------------------------------------------------------------------

std::string csv_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.8e", v);
  return buf;
}

void write_trials_csv(std::ostream& os, const TrialSet& ts) {
  os << "algorithm,fid,instance,D,seed,total_evals,final_delta_f";
  for (double df : ts.targets.dfs) os << ",hit_" << target_label(df);
  os << '\n';
  for (const auto& r : ts.rows) write_trial_row(os, ts.targets, r);
}

TrialSet read_trials_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line))
    throw InvalidInput("read_trials_csv: empty input");
  const auto head = split_csv(line);
  const char* expect[] = {"algorithm", "fid",         "instance",     "D",
                          "seed",      "total_evals", "final_delta_f"};
  if (head.size() < 8)
    throw InvalidInput("read_trials_csv: malformed header");
  for (int i = 0; i < 7; ++i)
    if (head[i] != expect[i])
      throw InvalidInput("read_trials_csv: malformed header");

  TrialSet ts;
  ts.targets.dfs.clear();
  for (size_t i = 7; i < head.size(); ++i) {
    if (head[i].rfind("hit_", 0) != 0)
      throw InvalidInput("read_trials_csv: malformed target column");
    ts.targets.dfs.push_back(std::strtod(head[i].c_str() + 4, nullptr));
  }

  const size_t ncols = head.size();
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != ncols) continue;  // torn or foreign line: skip
    TrialRecord r;
    r.algo = f[0];
    r.fid = std::atoi(f[1].c_str());
    r.instance = std::atoi(f[2].c_str());
    r.dim = std::atoi(f[3].c_str());
    r.seed = std::strtoull(f[4].c_str(), nullptr, 10);
    r.total_evals = std::atoll(f[5].c_str());
    r.final_delta_f = std::strtod(f[6].c_str(), nullptr);
    r.hits.resize(ts.targets.dfs.size(), -1);
    for (size_t t = 0; t < ts.targets.dfs.size(); ++t)
      if (!f[7 + t].empty()) r.hits[t] = std::atoll(f[7 + t].c_str());
    ts.rows.push_back(std::move(r));
  }
  return ts;
}

TrialSet read_trials_csv_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw InvalidInput("read_trials_csv_file: cannot open " + path);
  return read_trials_csv(is);
}

void write_ert_csv(std::ostream& os, const std::vector<ErtEntry>& entries) {
  os << "algorithm,fid,D,delta_f,ert,n_success,n_trials\n";
  for (const auto& e : entries)
    os << e.algo << ',' << e.fid << ',' << e.dim << ','
       << csv_double(e.delta_f) << ',' << csv_double(e.ert) << ','
       << e.n_success << ',' << e.n_trials << '\n';
}

void write_ecdf_csv(std::ostream& os, const std::vector<EcdfCurve>& curves) {
  os << "group,D,algorithm,fevals_per_D,proportion\n";
  for (const auto& c : curves)
    for (size_t j = 0; j < c.x.size(); ++j)
      os << c.group << ',' << c.dim << ',' << c.algo << ','
         << csv_double(c.x[j]) << ',' << csv_double(c.prop[j]) << '\n';
}

void write_timing_csv(std::ostream& os, const std::vector<TimingPoint>& pts) {
  os << "fid,D,n_training,cpu_seconds_per_eval\n";
  for (const auto& p : pts)
    os << p.fid << ',' << p.dim << ',' << p.n_training << ','
       << csv_double(p.cpu_seconds_per_eval) << '\n';
}

}  // namespace sacma
