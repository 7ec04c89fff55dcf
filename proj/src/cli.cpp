#include "sacma/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "sacma/cma.hpp"
#include "sacma/errors.hpp"
#include "sacma/harness.hpp"
#include "sacma/linalg.hpp"
#include "sacma/problem.hpp"
#include "sacma/restart.hpp"
#include "sacma/rng.hpp"
#include "sacma/surrogate.hpp"
#include "sacma/testbed.hpp"

namespace sacma {
namespace {

namespace fs = std::filesystem;

// Exit-code contract: 0 success, 1 usage error, 2 runtime failure.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

long long parse_ll(const std::string& tok, const std::string& what) {
  if (tok.empty()) throw UsageError("empty value in " + what);
  char* end = nullptr;
  errno = 0;
  long long v = std::strtoll(tok.c_str(), &end, 10);
  if (errno != 0 || end != tok.c_str() + tok.size())
    throw UsageError("bad integer '" + tok + "' in " + what);
  return v;
}

// Comma-separated integers; each token is either "n" or an inclusive
// range "a..b".
std::vector<int> parse_int_list(const std::string& s, const std::string& what) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    std::size_t dots = tok.find("..");
    if (dots == std::string::npos) {
      out.push_back(static_cast<int>(parse_ll(tok, what)));
    } else {
      long long a = parse_ll(tok.substr(0, dots), what);
      long long b = parse_ll(tok.substr(dots + 2), what);
      if (b < a) throw UsageError("descending range '" + tok + "' in " + what);
      if (b - a > 1000000) throw UsageError("range too large in " + what);
      for (long long v = a; v <= b; ++v) out.push_back(static_cast<int>(v));
    }
  }
  if (out.empty()) throw UsageError("empty list in " + what);
  return out;
}

Vec parse_double_list(const std::string& s, const std::string& what) {
  Vec out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    tok = trim(tok);
    if (tok.empty()) throw UsageError("empty value in " + what);
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(tok.c_str(), &end);
    if (errno != 0 || end != tok.c_str() + tok.size() || !std::isfinite(v))
      throw UsageError("bad number '" + tok + "' in " + what);
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("empty list in " + what);
  return out;
}

// Config files are line-oriented `key=value`; blank lines and lines
// starting with '#' are skipped.  Keys are option names without the
// leading dashes.
std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file: " + path);
  std::vector<std::string> toks;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line without '=': " + line);
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw UsageError("config line with empty key: " + line);
    toks.push_back("--" + key + "=" + val);
  }
  return toks;
}

// Writes the effective configuration next to the outputs so the exact
// invocation can be replayed with `--config`.
void write_echo(const std::string& out_dir, const std::string& sub,
                const std::vector<std::pair<std::string, std::string>>& kv) {
  fs::create_directories(out_dir);
  std::string path = out_dir + "/" + sub + ".config";
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw Error("cannot write " + path);
  os << "# effective configuration for subcommand '" << sub << "'\n";
  for (const auto& [k, v] : kv) os << k << "=" << v << "\n";
  os.flush();
  if (!os) throw Error("failed writing " + path);
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

TrialSet load_trials(const std::string& dir) {
  std::string path = dir + "/trials.csv";
  if (!fs::exists(path)) throw UsageError("no trials file at " + path);
  return read_trials_csv_file(path);
}

// --- subcommand option bags ---------------------------------------------------

struct RunOpts {
  std::string algo = "ipop-saacm";
  std::string fids, dims;
  std::string instances = "1..15";
  std::int64_t budget_mult = 10000;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string out = "out";
  int g_start = 10;
  int nhat_max = 20;
  int lambda_hyp = 20;
  std::optional<int> active;
  bool no_surrogate = false;
};

struct ErtOpts {
  std::string out = "out";
  std::string target = "1e-8";
};

struct EcdfOpts {
  std::string out = "out";
  int n_boot = 1000;
  std::uint64_t seed = 1;
};

struct TimingOpts {
  std::string fids = "1,8,10,15";
  std::string dims = "2,5,10";
  double cpu_seconds = 2.0;
  std::string train_ns = "100,200,400,800";
  int train_dim = 10;
  std::uint64_t seed = 1;
  std::string out = "out";
};

struct SpeedupOpts {
  std::string a_dir, b_dir;
  std::string target = "1e-8";
  std::string out = "out";
};

int do_run(const RunOpts& o) {
  ExperimentConfig cfg;
  auto algo = algo_from_name(o.algo);
  if (!algo)
    throw UsageError("unknown --algo '" + o.algo +
                     "' (expected ipop-acma, bipop-cma, ipop-saacm or "
                     "bipop-saacm)");
  cfg.algo = *algo;
  cfg.fids = parse_int_list(o.fids, "--fid");
  cfg.dims = parse_int_list(o.dims, "--dim");
  cfg.instances = parse_int_list(o.instances, "--instances");
  for (int fid : cfg.fids)
    if (fid < 1 || fid > 24)
      throw UsageError("--fid values must be in 1..24");
  for (int dim : cfg.dims)
    if (dim < 2 || dim > 1024)
      throw UsageError("--dim values must be in 2..1024");
  for (int inst : cfg.instances)
    if (inst < 1) throw UsageError("--instances values must be >= 1");
  cfg.budget_mult = o.budget_mult;
  cfg.seed = o.seed;
  cfg.jobs = o.jobs;
  cfg.out_dir = o.out;
  cfg.g_start = o.g_start;
  cfg.nhat_max = o.nhat_max;
  cfg.lambda_hyp = o.lambda_hyp;
  if (o.active) cfg.active = (*o.active != 0);
  if (o.no_surrogate) cfg.surrogate = false;

  TrialSet ts = run_experiment(cfg);

  {
    std::string path = o.out + "/functions.csv";
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw Error("cannot write " + path);
    metadata_csv(os, cfg.fids, cfg.instances, cfg.dims);
  }

  std::vector<std::pair<std::string, std::string>> kv{
      {"algo", o.algo},
      {"fid", o.fids},
      {"dim", o.dims},
      {"instances", o.instances},
      {"budget-mult", std::to_string(o.budget_mult)},
      {"seed", std::to_string(o.seed)},
      {"jobs", std::to_string(o.jobs)},
      {"out", o.out},
      {"g-start", std::to_string(o.g_start)},
      {"nhat-max", std::to_string(o.nhat_max)},
      {"lambda-hyp", std::to_string(o.lambda_hyp)},
  };
  if (o.active) kv.emplace_back("active", std::to_string(*o.active));
  if (o.no_surrogate) kv.emplace_back("no-surrogate", "1");
  write_echo(o.out, "run", kv);

  std::cout << "trials: " << ts.rows.size() << " rows in " << o.out
            << "/trials.csv\n";
  return 0;
}

int do_ert(const ErtOpts& o) {
  TrialSet ts = load_trials(o.out);
  Vec dfs = parse_double_list(o.target, "--target");
  std::vector<ErtEntry> tbl = ert_table(ts, dfs);
  std::string path = o.out + "/ert.csv";
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw Error("cannot write " + path);
  write_ert_csv(os, tbl);
  os.flush();
  if (!os) throw Error("failed writing " + path);

  write_echo(o.out, "ert", {{"out", o.out}, {"target", o.target}});
  std::cout << "ert: " << tbl.size() << " rows in " << path << "\n";
  return 0;
}

int do_ecdf(const EcdfOpts& o) {
  TrialSet ts = load_trials(o.out);
  std::vector<EcdfCurve> curves =
      bootstrap_ecdf(ts, o.n_boot, Rng(o.seed).stream("ecdf"));
  std::string path = o.out + "/ecdf.csv";
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw Error("cannot write " + path);
  write_ecdf_csv(os, curves);
  os.flush();
  if (!os) throw Error("failed writing " + path);

  write_echo(o.out, "ecdf",
             {{"out", o.out},
              {"n-boot", std::to_string(o.n_boot)},
              {"seed", std::to_string(o.seed)}});
  std::cout << "ecdf: " << curves.size() << " curves in " << path << "\n";
  return 0;
}

int do_timing(const TimingOpts& o) {
  std::vector<int> fids = parse_int_list(o.fids, "--fid");
  std::vector<int> dims = parse_int_list(o.dims, "--dim");
  std::vector<TimingPoint> pts =
      timing_experiment(fids, dims, o.cpu_seconds, o.seed);
  fs::create_directories(o.out);
  {
    std::string path = o.out + "/timing.csv";
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw Error("cannot write " + path);
    write_timing_csv(os, pts);
  }

  std::vector<int> ns = parse_int_list(o.train_ns, "--train-ns");
  std::vector<TrainTiming> tb = training_benchmark(ns, o.train_dim, o.seed);
  {
    std::string path = o.out + "/train_timing.csv";
    std::ofstream os(path, std::ios::trunc);
    if (!os) throw Error("cannot write " + path);
    os << "n,seconds\n";
    for (const auto& t : tb)
      os << t.n << "," << csv_double(t.seconds) << "\n";
  }
  Vec xs, ys;
  for (const auto& t : tb) {
    xs.push_back(static_cast<double>(t.n));
    ys.push_back(t.seconds);
  }
  double slope = loglog_slope(xs, ys);

  write_echo(o.out, "timing",
             {{"fid", o.fids},
              {"dim", o.dims},
              {"cpu-seconds", fmt_double(o.cpu_seconds)},
              {"train-ns", o.train_ns},
              {"train-dim", std::to_string(o.train_dim)},
              {"seed", std::to_string(o.seed)},
              {"out", o.out}});

  std::cout << "timing: " << pts.size() << " points in " << o.out
            << "/timing.csv\n";
  std::cout << "training cost log-log slope vs n (D=" << o.train_dim
            << "): " << fmt_double(slope) << "\n";
  return 0;
}

int do_speedup(const SpeedupOpts& o) {
  TrialSet a = load_trials(o.a_dir);
  TrialSet b = load_trials(o.b_dir);
  Vec dfs = parse_double_list(o.target, "--target");
  std::vector<SpeedupEntry> tbl = speedup_table(a, b, dfs);
  fs::create_directories(o.out);
  std::string path = o.out + "/speedup.csv";
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw Error("cannot write " + path);
  os << "fid,D,delta_f,ratio,comparable\n";
  for (const auto& e : tbl) {
    os << e.fid << "," << e.dim << "," << csv_double(e.delta_f) << ","
       << (e.comparable ? csv_double(e.ratio) : std::string()) << ","
       << (e.comparable ? 1 : 0) << "\n";
  }
  os.flush();
  if (!os) throw Error("failed writing " + path);

  write_echo(o.out, "speedup",
             {{"a", o.a_dir}, {"b", o.b_dir}, {"target", o.target},
              {"out", o.out}});
  std::cout << "speedup: " << tbl.size() << " rows in " << path << "\n";
  return 0;
}

// Fast internal consistency checks; exits nonzero on the first failure.
int do_selftest() {
  int failures = 0;
  auto check = [&](bool ok, const std::string& what) {
    std::cout << (ok ? "ok   " : "FAIL ") << what << "\n";
    if (!ok) ++failures;
  };

  {
    Rng a(42);
    Rng b(42);
    bool same = true;
    for (int i = 0; i < 16; ++i) same = same && a.next_u64() == b.next_u64();
    Rng s1 = Rng(42).stream("x");
    Rng s2 = Rng(42).stream("y");
    bool differ = s1.next_u64() != s2.next_u64();
    Rng u(7);
    bool in_range = true;
    for (int i = 0; i < 256; ++i) {
      double v = u.uniform01();
      in_range = in_range && v >= 0.0 && v < 1.0;
    }
    check(same && differ && in_range, "rng determinism and streams");
  }

  {
    SymMatrix m(2);
    m.set(0, 0, 4.0);
    m.set(1, 1, 1.0);
    EigenDecomposition eb = sym_eigen(m);
    check(std::abs(eb.d[0] - 4.0) < 1e-12 && std::abs(eb.d[1] - 1.0) < 1e-12,
          "eigendecomposition of a diagonal matrix");
  }

  {
    Vec asc{1, 2, 3, 4, 5};
    Vec desc{5, 4, 3, 2, 1};
    double e0 = rank_error_from_scores(asc, asc);
    double e1 = rank_error_from_scores(desc, asc);
    check(e0 == 0.0 && e1 == 1.0, "rank error endpoints");
  }

  {
    TrialSet ts;
    ts.targets = TargetSet::standard();
    auto mk = [&](std::int64_t total, std::int64_t hit) {
      TrialRecord r;
      r.algo = "x";
      r.fid = 1;
      r.instance = 1;
      r.dim = 2;
      r.total_evals = total;
      r.final_delta_f = hit >= 0 ? 1e-9 : 1.0;
      r.hits.assign(ts.targets.dfs.size(), -1);
      if (hit >= 0) r.hits.back() = hit;
      return r;
    };
    TrialSet one;
    one.targets = ts.targets;
    one.rows = {mk(200, 200)};
    TrialSet two;
    two.targets = ts.targets;
    two.rows = {mk(200, 200), mk(900, -1)};
    TrialSet none;
    none.targets = ts.targets;
    none.rows = {mk(900, -1)};
    ErtEntry e1 = compute_ert(one, "x", 1, 2, 1e-8);
    ErtEntry e2 = compute_ert(two, "x", 1, 2, 1e-8);
    ErtEntry e3 = compute_ert(none, "x", 1, 2, 1e-8);
    check(e1.ert == 200.0 && e2.ert == 1100.0 && std::isinf(e3.ert),
          "expected running time oracles (200, 1100, inf)");
  }

  {
    Objective obj(1, 1, 5);
    double v = obj.evaluate(obj.x_opt());
    Objective obj8(8, 1, 5);
    double v8 = obj8.evaluate(obj8.x_opt());
    check(std::abs(v - obj.f_opt()) <= 1e-12 &&
              std::abs(v8 - obj8.f_opt()) <= 1e-12 && obj.evals() == 1,
          "objective optimum consistency (f1, f8)");
  }

  {
    Problem prob;
    prob.fn = [](const Vec& x) {
      double s = 0.0;
      for (double v : x) s += v * v;
      return s;
    };
    prob.max_evals = 4000;
    prob.target_f = 1e-9;
    Vec x0{3.0, -2.0};
    RunResult rr = run_cma(prob, default_params(2), x0, 2.0, Rng(5));
    check(rr.stop == StopReason::Target && rr.best_f <= 1e-9,
          "plain optimizer solves the 2-D sphere");
  }

  {
    Vec a{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    RankSumResult same = rank_sum_test(a, a);
    Vec b;
    for (double v : a) b.push_back(v + 100.0);
    RankSumResult sep = rank_sum_test(a, b);
    check(same.p == 1.0 && sep.u == 0.0 && sep.p < 0.05,
          "rank-sum test endpoints");
  }

  if (failures == 0) {
    std::cout << "selftest: all checks passed\n";
    return 0;
  }
  std::cout << "selftest: " << failures << " check(s) failed\n";
  return 2;
}

}  // namespace

int cli_main(std::vector<std::string> args) {
  try {
    // `--config FILE` is resolved before CLI11 sees the arguments: the
    // file's key=value lines become --key=value tokens injected right
    // after the subcommand, so explicit flags override file values.
    std::string cfg_path;
    for (std::size_t i = 0; i < args.size();) {
      if (args[i] == "--config") {
        if (i + 1 >= args.size())
          throw UsageError("--config expects a file path");
        cfg_path = args[i + 1];
        args.erase(args.begin() + i, args.begin() + i + 2);
      } else if (args[i].rfind("--config=", 0) == 0) {
        cfg_path = args[i].substr(9);
        args.erase(args.begin() + i);
      } else {
        ++i;
      }
    }
    static const std::vector<std::string> kSubs{"run",    "ert",     "ecdf",
                                                "timing", "speedup", "selftest"};
    if (!cfg_path.empty()) {
      std::vector<std::string> toks = config_tokens(cfg_path);
      std::size_t pos = args.size();
      for (std::size_t i = 0; i < args.size(); ++i) {
        if (std::find(kSubs.begin(), kSubs.end(), args[i]) != kSubs.end()) {
          pos = i + 1;
          break;
        }
      }
      if (pos == args.size() && args.empty())
        throw UsageError("--config requires a subcommand");
      args.insert(args.begin() + static_cast<std::ptrdiff_t>(pos),
                  toks.begin(), toks.end());
    }

    CLI::App app{"surrogate-assisted CMA-ES benchmark toolkit"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);

    RunOpts ro;
    CLI::App* run = app.add_subcommand("run", "run a benchmark experiment");
    run->add_option("--algo", ro.algo,
                    "algorithm: ipop-acma | bipop-cma | ipop-saacm | "
                    "bipop-saacm");
    run->add_option("--fid", ro.fids, "function ids, e.g. 1,2,10..14")
        ->required();
    run->add_option("--dim", ro.dims, "dimensions, e.g. 2,5,10")->required();
    run->add_option("--instances", ro.instances, "instance list (default 1..15)");
    run->add_option("--budget-mult", ro.budget_mult,
                    "evaluation budget per trial as a multiple of D")
        ->check(CLI::PositiveNumber);
    run->add_option("--seed", ro.seed, "master seed");
    run->add_option("--jobs", ro.jobs, "worker threads")
        ->check(CLI::Range(1, 4096));
    run->add_option("--out", ro.out, "output directory");
    run->add_option("--g-start", ro.g_start,
                    "true generations before the surrogate activates")
        ->check(CLI::NonNegativeNumber);
    run->add_option("--nhat-max", ro.nhat_max,
                    "maximum surrogate generations per cycle")
        ->check(CLI::NonNegativeNumber);
    run->add_option("--lambda-hyp", ro.lambda_hyp,
                    "hyper-parameter search population")
        ->check(CLI::PositiveNumber);
    run->add_option("--active", ro.active,
                    "override active covariance update (0 or 1)")
        ->check(CLI::Range(0, 1));
    run->add_flag("--no-surrogate", ro.no_surrogate,
                  "disable the surrogate even for surrogate algorithms");

    ErtOpts eo;
    CLI::App* ert = app.add_subcommand(
        "ert", "expected running time table from trials.csv");
    ert->add_option("--out", eo.out, "directory holding trials.csv");
    ert->add_option("--target", eo.target, "precision list, e.g. 1e-2,1e-8");

    EcdfOpts co;
    CLI::App* ecdf = app.add_subcommand(
        "ecdf", "bootstrapped runtime distributions from trials.csv");
    ecdf->add_option("--out", co.out, "directory holding trials.csv");
    ecdf->add_option("--n-boot", co.n_boot, "bootstrap samples per pair")
        ->check(CLI::PositiveNumber);
    ecdf->add_option("--seed", co.seed, "bootstrap seed");

    TimingOpts to;
    CLI::App* timing = app.add_subcommand(
        "timing", "CPU cost per evaluation and training-cost scaling");
    timing->add_option("--fid", to.fids, "function ids");
    timing->add_option("--dim", to.dims, "dimensions");
    timing->add_option("--cpu-seconds", to.cpu_seconds,
                       "CPU budget per (fid, dim) point")
        ->check(CLI::PositiveNumber);
    timing->add_option("--train-ns", to.train_ns,
                       "training-set sizes for the scaling fit");
    timing->add_option("--train-dim", to.train_dim,
                       "dimension for the training-cost fit")
        ->check(CLI::PositiveNumber);
    timing->add_option("--seed", to.seed, "seed");
    timing->add_option("--out", to.out, "output directory");

    SpeedupOpts so;
    CLI::App* speedup = app.add_subcommand(
        "speedup", "ERT ratio table between two result directories");
    speedup->add_option("--a", so.a_dir, "baseline results directory")
        ->required();
    speedup->add_option("--b", so.b_dir, "comparison results directory")
        ->required();
    speedup->add_option("--target", so.target, "precision list");
    speedup->add_option("--out", so.out, "output directory");

    app.add_subcommand("selftest", "run fast internal consistency checks");

    try {
      std::reverse(args.begin(), args.end());
      app.parse(args);
    } catch (const CLI::CallForHelp& e) {
      return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
      return app.exit(e);
    } catch (const CLI::ParseError& e) {
      app.exit(e);
      return 1;
    }

    if (app.got_subcommand(run)) return do_run(ro);
    if (app.got_subcommand(ert)) return do_ert(eo);
    if (app.got_subcommand(ecdf)) return do_ecdf(co);
    if (app.got_subcommand(timing)) return do_timing(to);
    if (app.got_subcommand(speedup)) return do_speedup(so);
    return do_selftest();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const InvalidParam& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

int cli_main(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(std::move(args));
}

}  // namespace sacma
