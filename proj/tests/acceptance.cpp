// Acceptance suite: runs every acceptance criterion end to end and prints
// one pass/fail line per criterion. Benchmark criteria go through the CLI
// binary (path in argv[1]); sampler-correctness criteria run in-process.
//
// The benchmark criteria default to the reduced 300-gene / 10-seed variant
// (same tolerances); set GMNB_ACCEPT_FULL=1 for the 1000-gene / 20-seed
// runs. GMNB_ACCEPT_WORKERS overrides the worker count (default 2).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "gmnb/bayes_factor.hpp"
#include "gmnb/distributions.hpp"
#include "gmnb/evaluation.hpp"
#include "gmnb/gibbs.hpp"
#include "gmnb/model.hpp"
#include "gmnb/rng.hpp"
#include "gmnb/synthetic.hpp"
#include "stat_utils.hpp"
#include "test_helpers.hpp"

namespace fs = std::filesystem;
using namespace gmnb;

namespace {

std::string g_cli_path;
fs::path g_work_dir;
int g_workers = 2;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = "'" + g_cli_path + "' " + args + " 2>> '" +
                          (g_work_dir / "cli_stderr.log").string() + "'";
  return std::system(cmd.c_str());
}

// mean AUC rows out of a bench summary file: metric -> (mean, sd)
bool parse_auc_summary(const fs::path& p, double& roc_mean, double& roc_sd, double& pr_mean,
                       double& pr_sd) {
  std::ifstream in(p);
  if (!in) return false;
  std::string line;
  bool have_roc = false, have_pr = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("method", 0) == 0) continue;
    std::istringstream ss(line);
    std::string method, generator, metric;
    double mean = 0, sd = 0;
    int n = 0;
    ss >> method >> generator >> metric >> mean >> sd >> n;
    if (metric == "roc") {
      roc_mean = mean;
      roc_sd = sd;
      have_roc = true;
    } else if (metric == "pr") {
      pr_mean = mean;
      pr_sd = sd;
      have_pr = true;
    }
  }
  return have_roc && have_pr;
}

Outcome bench_criterion(const char* generator, std::uint64_t seed, double roc_center,
                        double roc_tol, double pr_center, double pr_tol) {
  const bool full = std::getenv("GMNB_ACCEPT_FULL") != nullptr;
  const int genes = full ? 1000 : 300;
  const int runs = full ? 20 : 10;

  const std::string prefix = (g_work_dir / (std::string("bench_") + generator)).string();
  std::ostringstream cmd;
  cmd << "bench --generator " << generator << " --runs " << runs << " --genes " << genes
      << " --de-frac 0.1 --reps 4 --seed " << seed << " --workers " << g_workers << " --out '"
      << prefix << "'";
  if (run_cli(cmd.str()) != 0) return {false, "bench command failed"};

  double roc_mean = 0, roc_sd = 0, pr_mean = 0, pr_sd = 0;
  if (!parse_auc_summary(prefix + "_auc.tsv", roc_mean, roc_sd, pr_mean, pr_sd))
    return {false, "could not parse AUC summary"};

  const bool roc_ok = roc_mean >= roc_center - roc_tol && roc_mean <= roc_center + roc_tol;
  const bool pr_ok = pr_mean >= pr_center - pr_tol && pr_mean <= pr_center + pr_tol;
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "genes=%d runs=%d roc=%.3f+-%.3f (target %.2f+-%.2f) pr=%.3f+-%.3f (target "
                "%.2f+-%.2f)",
                genes, runs, roc_mean, roc_sd, roc_center, roc_tol, pr_mean, pr_sd, pr_center,
                pr_tol);
  return {roc_ok && pr_ok, buf};
}

// ---- criterion 4: marginal-conditional vs successive-conditional ----------

struct MomentChain {
  std::vector<double> values;
  double mean() const { return stat_utils::mean(values); }
};

Outcome geweke_criterion() {
  // K=3, T=2, J=2. Hyperparameters keep all compared moments finite:
  // c0 > 4 bounds E[1/c^4], which the second moment of r at t=2 needs.
  const int K = 3, T1 = 3, J = 2;
  GmnbHyper hyper;
  hyper.a0 = 2.0;
  hyper.b0 = 2.0;
  hyper.e_init = 2.0;
  hyper.f_init = 2.0;
  hyper.c0 = 6.0;
  hyper.d0 = 5.0;

  const int n_mc = 100000;
  const int n_sc = 100000;

  // test functions: per-time means over genes of r and r^2, overall c and
  // c^2, per-time means over samples of p and p^2
  const int n_fn = 2 * T1 + 2 + 2 * T1;
  std::vector<MomentChain> mc(n_fn), sc(n_fn);

  auto record = [&](std::vector<MomentChain>& out, const std::vector<double>& r,
                    const std::vector<double>& c, const std::vector<std::vector<double>>& p) {
    int f = 0;
    for (int t = 0; t < T1; ++t) {
      double m1 = 0, m2 = 0;
      for (int k = 0; k < K; ++k) {
        const double v = r[static_cast<std::size_t>(k) * T1 + t];
        m1 += v;
        m2 += v * v;
      }
      out[f++].values.push_back(m1 / K);
      out[f++].values.push_back(m2 / K);
    }
    double c1 = 0, c2 = 0;
    for (int k = 0; k < K; ++k) {
      c1 += c[k];
      c2 += c[k] * c[k];
    }
    out[f++].values.push_back(c1 / K);
    out[f++].values.push_back(c2 / K);
    for (int t = 0; t < T1; ++t) {
      double p1 = 0, p2 = 0;
      for (int j = 0; j < J; ++j) {
        p1 += p[t][j];
        p2 += p[t][j] * p[t][j];
      }
      out[f++].values.push_back(p1 / J);
      out[f++].values.push_back(p2 / J);
    }
  };

  auto prior_draw = [&](RngStream& rng, std::vector<double>& r, std::vector<double>& c,
                        std::vector<std::vector<double>>& p) {
    for (int k = 0; k < K; ++k) {
      c[k] = sample_gamma(hyper.c0, 1.0 / hyper.d0, rng);
      double prev = sample_gamma(hyper.e_init, 1.0 / hyper.f_init, rng);
      r[static_cast<std::size_t>(k) * T1 + 0] = prev;
      for (int t = 1; t < T1; ++t) {
        prev = std::max(sample_gamma(prev, 1.0 / c[k], rng), kGammaFloor);
        r[static_cast<std::size_t>(k) * T1 + t] = prev;
      }
    }
    for (int t = 0; t < T1; ++t)
      for (int j = 0; j < J; ++j) p[t][j] = sample_beta(hyper.a0, hyper.b0, rng);
  };

  // marginal-conditional: independent prior draws
  {
    RngStream rng(811, 0);
    std::vector<double> r(static_cast<std::size_t>(K) * T1), c(K);
    std::vector<std::vector<double>> p(T1, std::vector<double>(J));
    for (int i = 0; i < n_mc; ++i) {
      prior_draw(rng, r, c, p);
      record(mc, r, c, p);
    }
  }

  // successive-conditional: alternate data simulation with one Gibbs sweep
  {
    RngStream rng(812, 0);
    auto data = test_helpers::make_tensor(K, {0.0, 1.0, 2.0}, J);
    ChainState s = init_chain_state(data);
    prior_draw(rng, s.r, s.c, s.p);
    for (int i = 0; i < n_sc; ++i) {
      for (int k = 0; k < K; ++k)
        for (int t = 0; t < T1; ++t)
          for (int j = 0; j < J; ++j)
            data.at(k, t, j) = sample_nb(s.r_at(k, t), s.p[t][j], rng);
      backward_pass(data, s, rng);
      compute_q(s);
      forward_pass(s, hyper, rng);
      update_c(s, hyper, rng);
      update_p(data, s, hyper, rng);
      record(sc, s.r, s.c, s.p);
    }
  }

  double worst_z = 0.0;
  int worst_fn = -1;
  for (int f = 0; f < n_fn; ++f) {
    const double se_mc = std::sqrt(stat_utils::variance(mc[f].values) / n_mc);
    const double se_sc = stat_utils::batch_means_se(sc[f].values, 100);
    const double z =
        (mc[f].mean() - sc[f].mean()) / std::sqrt(se_mc * se_mc + se_sc * se_sc);
    if (std::abs(z) > std::abs(worst_z)) {
      worst_z = z;
      worst_fn = f;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%d moment functions, %d sweeps, worst |z|=%.2f (fn %d)",
                n_fn, n_sc, std::abs(worst_z), worst_fn);
  return {std::abs(worst_z) < 3.0, buf};
}

// ---- criterion 5: distribution suite ----------------------------------------

Outcome distributions_criterion() {
  std::string fails;

  {  // CRT support and expectation grid
    for (const std::int64_t n : {1, 5, 50, 500}) {
      for (const double r : {0.1, 1.0, 10.0}) {
        const int reps = 100000;
        RngStream rng(900, stream_key(static_cast<std::uint64_t>(n),
                                      static_cast<std::uint64_t>(r * 1000)));
        std::vector<double> draws(reps);
        for (auto& d : draws) {
          const auto l = sample_crt(n, r, rng);
          if (l < 1 || l > n) fails += " crt-support";
          d = static_cast<double>(l);
        }
        const double expect = stat_utils::crt_mean_bruteforce(n, r);
        const double se = std::sqrt(stat_utils::variance(draws) / reps);
        if (std::abs(stat_utils::mean(draws) - expect) > 3.0 * se + 1e-12)
          fails += " crt-mean(n=" + std::to_string(n) + ")";
      }
    }
    RngStream rng(901, 0);
    for (int i = 0; i < 1000; ++i)
      if (sample_crt(0, 3.0, rng) != 0) fails += " crt-zero";
  }

  {  // compound-Poisson vs gamma-Poisson
    int pair_idx = 0;
    for (const double r : {0.5, 5.0}) {
      for (const double p : {0.2, 0.8}) {
        const int n = 100000;
        RngStream rng1(902, 2 * pair_idx), rng2(902, 2 * pair_idx + 1);
        ++pair_idx;
        std::vector<std::int64_t> a(n), b(n);
        for (int i = 0; i < n; ++i) {
          a[i] = sample_nb_compound(r, p, rng1);
          b[i] = sample_nb(r, p, rng2);
        }
        const auto [stat, df] = stat_utils::chi2_two_sample(a, b);
        if (df < 1 || stat >= stat_utils::chi2_critical(df, 0.01))
          fails += " nb-equiv(r=" + std::to_string(r) + ")";
      }
    }
  }

  {  // logarithmic pmf
    const int n = 1000000;
    RngStream rng(903, 0);
    double ones = 0;
    for (int i = 0; i < n; ++i)
      if (sample_logarithmic(0.5, rng) == 1) ones += 1.0;
    if (std::abs(ones / n - stat_utils::log_series_pmf(1, 0.5)) > 0.002) fails += " log-pmf";
  }

  {  // gamma and beta moments
    const int n = 1000000;
    RngStream rng(904, 0);
    std::vector<double> g(n);
    for (auto& v : g) v = sample_gamma(2.0, 0.5, rng);
    if (std::abs(stat_utils::mean(g) - 1.0) > 0.01) fails += " gamma-mean";
    for (auto& v : g) v = sample_gamma(3.0, 2.0, rng);
    if (std::abs(stat_utils::variance(g) - 12.0) > 0.2) fails += " gamma-var";
    double bsum = 0;
    for (int i = 0; i < n; ++i) bsum += sample_beta(2.0, 3.0, rng);
    if (std::abs(bsum / n - 0.4) > 0.005) fails += " beta-mean";
  }

  if (fails.empty()) return {true, "crt grid, nb equivalence, log pmf, gamma/beta moments"};
  return {false, "failed:" + fails};
}

// ---- criterion 6: null calibration -------------------------------------------

Outcome null_calibration_criterion() {
  const GmnbHyper hyper;
  std::string detail;
  bool all_ok = true;
  for (int rep = 0; rep < 3; ++rep) {
    SimSpec spec;
    spec.generator = Generator::gmnb;
    spec.n_genes = 200;
    spec.de_fraction = 0.0;  // identical-condition data
    spec.n_replicates = 4;
    spec.seed = 600 + rep;
    const LabeledDataset ds = simulate(spec);

    GibbsConfig cfg;
    cfg.total_iters = 2000;
    cfg.burn_in = 1000;
    cfg.workers = g_workers;
    cfg.seed = 700 + rep;
    const BfReport report =
        compute_bf_report(ds.cond1, ds.cond2, hyper, cfg, MlEstimator::harmonic_mean);
    int below = 0;
    for (const auto& g : report.genes)
      if (g.log_bf < kLogBfCut) ++below;
    const double frac = static_cast<double>(below) / report.genes.size();
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%sseed%d: %.1f%%", rep ? " " : "", rep, 100.0 * frac);
    detail += buf;
    if (frac < 0.95) all_ok = false;
  }
  return {all_ok, detail + " below ln(10) (need >=95%)"};
}

// ---- criterion 7: determinism ------------------------------------------------

Outcome determinism_criterion() {
  const std::string p = (g_work_dir / "det").string();
  if (run_cli("simulate --generator gmnb --genes 30 --de-frac 0.1 --reps 3 --seed 5 --out '" +
              p + "_a'") != 0)
    return {false, "simulate failed"};
  if (run_cli("simulate --generator gmnb --genes 30 --de-frac 0.1 --reps 3 --seed 5 --out '" +
              p + "_b'") != 0)
    return {false, "simulate rerun failed"};
  for (const char* suffix : {"_cond1.counts.tsv", "_cond2.counts.tsv", "_truth.tsv",
                             "_params.tsv", "_cond1.meta.tsv"}) {
    if (slurp(p + "_a" + suffix) != slurp(p + "_b" + suffix))
      return {false, std::string("simulate outputs differ: ") + suffix};
  }

  const std::string de_common = "de --cond1 '" + p + "_a_cond1.counts.tsv' --cond2 '" + p +
                                "_a_cond2.counts.tsv' --iters 300 --burn-in 150 --seed 9 ";
  if (run_cli(de_common + "--workers 1 --out '" + p + "_w1'") != 0)
    return {false, "de workers=1 failed"};
  if (run_cli(de_common + "--workers 1 --out '" + p + "_w1r'") != 0)
    return {false, "de rerun failed"};
  if (run_cli(de_common + "--workers 4 --out '" + p + "_w4'") != 0)
    return {false, "de workers=4 failed"};

  for (const char* suffix :
       {"_bf.tsv", "_m0_rsummary.tsv", "_m1_rsummary.tsv", "_m2_rsummary.tsv"}) {
    const std::string a = slurp(p + "_w1" + suffix);
    if (a.empty()) return {false, std::string("missing output: ") + suffix};
    if (a != slurp(p + "_w1r" + suffix))
      return {false, std::string("rerun differs: ") + suffix};
    // worker-count invariance: only the recorded config line may differ
    std::string b = slurp(p + "_w4" + suffix);
    const auto strip_config = [](std::string s) {
      std::string out;
      std::istringstream ss(s);
      std::string line;
      while (std::getline(ss, line))
        if (line.rfind("# config:", 0) != 0) out += line + "\n";
      return out;
    };
    if (strip_config(a) != strip_config(b))
      return {false, std::string("worker counts disagree: ") + suffix};
  }

  // eval is a pure function of its input files
  if (run_cli("eval --report '" + p + "_w1_bf.tsv' --truth '" + p + "_a_truth.tsv' --out '" +
              p + "_e1'") != 0)
    return {false, "eval failed"};
  if (run_cli("eval --report '" + p + "_w4_bf.tsv' --truth '" + p + "_a_truth.tsv' --out '" +
              p + "_e2'") != 0)
    return {false, "eval rerun failed"};
  if (slurp(p + "_e1_roc.tsv") != slurp(p + "_e2_roc.tsv"))
    return {false, "eval curves differ across worker counts"};

  return {true, "simulate/de/eval reruns byte-identical; worker count changes nothing"};
}

// ---- criterion 8: throughput report -------------------------------------------

Outcome throughput_criterion() {
  SimSpec spec;
  spec.generator = Generator::gmnb;
  spec.n_genes = 200;
  spec.de_fraction = 0.10;
  spec.n_replicates = 4;
  spec.seed = 42;
  const LabeledDataset ds = simulate(spec);
  GibbsConfig cfg;
  cfg.total_iters = 2000;
  cfg.burn_in = 1000;
  cfg.workers = g_workers;
  cfg.seed = 43;
  const PosteriorSamples samples = run_gibbs(ds.cond1, GmnbHyper{}, cfg);
  const double work =
      static_cast<double>(ds.cond1.n_genes()) * ds.cond1.n_times() * cfg.total_iters;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "sampler throughput %.3e gene-timepoint-iters/s (K=200, T1=5, %d workers); "
                "external baselines out of scope",
                work / std::max(samples.sampling_seconds, 1e-9), g_workers);
  return {true, buf};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: gmnb_acceptance <path-to-gmnb-cli> [criteria-subset e.g. 1,4,5]\n";
    return 2;
  }
  g_cli_path = argv[1];
  g_work_dir = fs::temp_directory_path() / ("gmnb_accept_" + std::to_string(::getpid()));
  fs::create_directories(g_work_dir);
  if (const char* w = std::getenv("GMNB_ACCEPT_WORKERS")) g_workers = std::atoi(w);

  std::string subset = argc > 2 ? argv[2] : "";
  auto selected = [&](int idx) {
    return subset.empty() ||
           subset.find(std::to_string(idx)) != std::string::npos;
  };

  struct Criterion {
    int index;
    const char* name;
    Outcome (*fn)();
  };
  static const Criterion criteria[] = {
      {1, "gmnb-generative-auc",
       [] { return bench_criterion("gmnb", 20, 0.84, 0.05, 0.61, 0.08); }},
      {2, "gp-generative-auc", [] { return bench_criterion("gp", 21, 0.94, 0.05, 0.79, 0.10); }},
      {3, "nbar1-generative-auc",
       [] { return bench_criterion("nbar1", 22, 0.81, 0.06, 0.51, 0.10); }},
      {4, "geweke-getting-it-right", geweke_criterion},
      {5, "distribution-suite", distributions_criterion},
      {6, "null-calibration", null_calibration_criterion},
      {7, "determinism", determinism_criterion},
      {8, "throughput-report", throughput_criterion},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (!selected(c.index)) continue;
    Outcome outcome;
    try {
      outcome = c.fn();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%d] %-24s %s  %s\n", c.index, c.name, outcome.pass ? "PASS" : "FAIL",
                outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  }

  std::error_code ec;
  fs::remove_all(g_work_dir, ec);
  if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
