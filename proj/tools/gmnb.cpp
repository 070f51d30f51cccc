// Command-line entry points for the gamma-Markov negative binomial toolkit:
// simulate benchmark datasets, fit the model, rank genes by Bayes factor,
// score ranked lists against ground truth, and run multi-seed benchmarks.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "gmnb/bayes_factor.hpp"
#include "gmnb/count_data.hpp"
#include "gmnb/errors.hpp"
#include "gmnb/evaluation.hpp"
#include "gmnb/gibbs.hpp"
#include "gmnb/io.hpp"
#include "gmnb/model.hpp"
#include "gmnb/rng.hpp"
#include "gmnb/synthetic.hpp"
#include "gmnb/version.hpp"

namespace {

using namespace gmnb;

struct CommonOpts {
  GmnbHyper hyper;
  GibbsConfig gibbs;
  std::string estimator = "harmonic-mean";
  bool normalize = false;  // refused on purpose; see add_normalize_flag
};

void add_hyper_flags(CLI::App* cmd, GmnbHyper& h) {
  cmd->add_option("--a0", h.a0, "Beta prior shape a0 on p");
  cmd->add_option("--b0", h.b0, "Beta prior shape b0 on p");
  cmd->add_option("--e0", h.e_init, "Gamma prior shape on the first-time-point dispersion");
  cmd->add_option("--f0", h.f_init, "Gamma prior rate on the first-time-point dispersion");
  cmd->add_option("--c0", h.c0, "Gamma prior shape on the chain rate c");
  cmd->add_option("--d0", h.d0, "Gamma prior rate on the chain rate c");
}

void add_gibbs_flags(CLI::App* cmd, GibbsConfig& g, bool with_seed = true) {
  cmd->add_option("--iters", g.total_iters, "Total Gibbs sweeps (default 2000)");
  cmd->add_option("--burn-in", g.burn_in, "Burn-in sweeps discarded (default 1000)");
  cmd->add_option("--thin", g.thin, "Thinning interval (default 1)");
  if (with_seed) cmd->add_option("--seed", g.seed, "RNG seed");
  cmd->add_option("--workers", g.workers, "Worker threads for gene-level parallelism");
  cmd->add_option("--crt-threshold", g.crt_exact_threshold,
                  "Largest count using the exact CRT Bernoulli sum (default 10000)");
}

void add_normalize_flag(CLI::App* cmd, bool& flag) {
  cmd->add_flag("--normalize", flag,
                "Not supported: per-sample sequencing depth is modeled explicitly by the "
                "p parameters, so inputs must be raw counts");
}

void reject_normalize(const CommonOpts& opts) {
  if (opts.normalize)
    throw validation_error(
        "--normalize is refused by design: the model absorbs sequencing depth in its "
        "per-sample probability parameters and expects raw, unnormalized counts");
}

std::string gibbs_config_string(const GibbsConfig& g, const GmnbHyper& h) {
  std::ostringstream ss;
  ss << "iters=" << g.total_iters << " burn_in=" << g.burn_in << " thin=" << g.thin
     << " workers=" << g.workers << " crt_threshold=" << g.crt_exact_threshold
     << " a0=" << format_double(h.a0) << " b0=" << format_double(h.b0)
     << " e0=" << format_double(h.e_init) << " f0=" << format_double(h.f_init)
     << " c0=" << format_double(h.c0) << " d0=" << format_double(h.d0);
  return ss.str();
}

std::string sim_config_string(const SimSpec& spec) {
  std::ostringstream ss;
  ss << "generator=" << generator_name(spec.generator) << " genes=" << spec.n_genes
     << " de_fraction=" << format_double(spec.de_fraction) << " replicates=" << spec.n_replicates
     << " sf=[" << format_double(spec.size_factor_range.lo) << ","
     << format_double(spec.size_factor_range.hi) << "]"
     << " nb_dispersion=" << format_double(spec.resolved_nb_dispersion()) << " time_grid=";
  for (std::size_t i = 0; i < spec.time_grid.size(); ++i) {
    if (i) ss << ',';
    ss << format_double(spec.time_grid[i]);
  }
  return ss.str();
}

void report_throughput(const char* label, const CountTensor& data, const GibbsConfig& cfg,
                       const PosteriorSamples& samples) {
  const double work = static_cast<double>(data.n_genes()) * data.n_times() * cfg.total_iters;
  std::fprintf(stderr, "throughput %s: K=%d T1=%d iters=%d time=%.2fs rate=%.3e gene-time-iters/s\n",
               label, data.n_genes(), data.n_times(), cfg.total_iters, samples.sampling_seconds,
               work / std::max(samples.sampling_seconds, 1e-9));
}

// --- simulate ---------------------------------------------------------------

struct SimulateArgs {
  SimSpec spec;
  std::string generator = "gmnb";
  std::string out_prefix;
};

void run_simulate(const SimulateArgs& args, const CommonOpts& opts) {
  reject_normalize(opts);
  SimSpec spec = args.spec;
  spec.generator = generator_from_name(args.generator);
  spec.validate();
  const LabeledDataset ds = simulate(spec);

  FileHeader header{sim_config_string(spec), spec.seed};
  write_count_matrix(args.out_prefix + "_cond1.counts.tsv", args.out_prefix + "_cond1.meta.tsv",
                     ds.cond1, header);
  write_count_matrix(args.out_prefix + "_cond2.counts.tsv", args.out_prefix + "_cond2.meta.tsv",
                     ds.cond2, header);
  write_truth(args.out_prefix + "_truth.tsv", ds, header);
  write_param_record(args.out_prefix + "_params.tsv", ds, header);
}

// --- fit --------------------------------------------------------------------

struct FitArgs {
  std::string counts_path;
  std::string meta_path;
  std::string out_prefix;
};

void run_fit(const FitArgs& args, const CommonOpts& opts) {
  reject_normalize(opts);
  const std::string meta =
      args.meta_path.empty() ? default_meta_path(args.counts_path) : args.meta_path;
  const CountTensor data = read_count_matrix(args.counts_path, meta);
  opts.hyper.validate();
  opts.gibbs.validate();

  const PosteriorSamples samples = run_gibbs(data, opts.hyper, opts.gibbs);
  report_throughput("fit", data, opts.gibbs, samples);

  FileHeader header{"fit counts=" + args.counts_path + " " +
                        gibbs_config_string(opts.gibbs, opts.hyper),
                    opts.gibbs.seed};
  write_r_summary(args.out_prefix + "_rsummary.tsv", data, summarize_r(samples), header);
  write_loglik_trace(args.out_prefix + "_loglik.tsv", samples, header);

  std::ofstream out(args.out_prefix + "_fit.tsv");
  if (!out) throw io_error("cannot open for writing: " + args.out_prefix + "_fit.tsv");
  out << "# gmnb " << kVersion << "\n# seed: " << opts.gibbs.seed << "\n";
  out << "key\tvalue\n";
  out << "draws\t" << samples.n_draws() << '\n';
  out << "log_ml_harmonic_mean\t"
      << format_double(log_marginal_likelihood(samples, MlEstimator::harmonic_mean)) << '\n';
  out << "log_ml_posterior_mean_likelihood\t"
      << format_double(log_marginal_likelihood(samples, MlEstimator::posterior_mean_likelihood))
      << '\n';
}

// --- de ----------------------------------------------------------------------

struct DeArgs {
  std::string cond1_path, cond2_path;
  std::string meta1_path, meta2_path;
  std::string out_prefix;
};

void run_de(const DeArgs& args, const CommonOpts& opts) {
  reject_normalize(opts);
  const CountTensor cond1 = read_count_matrix(
      args.cond1_path,
      args.meta1_path.empty() ? default_meta_path(args.cond1_path) : args.meta1_path);
  const CountTensor cond2 = read_count_matrix(
      args.cond2_path,
      args.meta2_path.empty() ? default_meta_path(args.cond2_path) : args.meta2_path);
  opts.hyper.validate();
  opts.gibbs.validate();
  const MlEstimator estimator = estimator_from_name(opts.estimator);

  ThreeFits fits;
  const BfReport report =
      compute_bf_report(cond1, cond2, opts.hyper, opts.gibbs, estimator, &fits);
  report_throughput("m0", cond1, opts.gibbs, fits.m0);
  report_throughput("m1", cond1, opts.gibbs, fits.m1);
  report_throughput("m2", cond2, opts.gibbs, fits.m2);

  FileHeader header{"de cond1=" + args.cond1_path + " cond2=" + args.cond2_path +
                        " estimator=" + opts.estimator + " " +
                        gibbs_config_string(opts.gibbs, opts.hyper),
                    opts.gibbs.seed};
  write_bf_report(args.out_prefix + "_bf.tsv", report, header);
  const CountTensor pooled = pool_conditions(cond1, cond2);
  write_r_summary(args.out_prefix + "_m0_rsummary.tsv", pooled, summarize_r(fits.m0), header);
  write_r_summary(args.out_prefix + "_m1_rsummary.tsv", cond1, summarize_r(fits.m1), header);
  write_r_summary(args.out_prefix + "_m2_rsummary.tsv", cond2, summarize_r(fits.m2), header);
}

// --- eval ---------------------------------------------------------------------

struct EvalArgs {
  std::string report_path;
  std::string truth_path;
  std::string out_prefix;
  std::string generator = "-";
};

void run_eval(const EvalArgs& args, const CommonOpts& opts) {
  reject_normalize(opts);
  const BfReport report = read_bf_report(args.report_path);
  const auto truth_rows = read_truth(args.truth_path);
  if (truth_rows.size() != report.genes.size())
    throw validation_error("eval: report and truth list different gene counts");

  std::vector<double> scores;
  std::vector<bool> truth;
  scores.reserve(report.genes.size());
  for (const auto& g : report.genes) {
    bool found = false;
    for (const auto& [id, is_de] : truth_rows) {
      if (id == g.gene_id) {
        truth.push_back(is_de);
        found = true;
        break;
      }
    }
    if (!found) throw validation_error("eval: gene " + g.gene_id + " missing from truth file");
    scores.push_back(g.log_bf);
  }

  const CurveResult roc = roc_curve(scores, truth);
  const CurveResult pr = pr_curve(scores, truth);
  FileHeader header{"eval report=" + args.report_path + " truth=" + args.truth_path, 0};
  write_curve(args.out_prefix + "_roc.tsv", roc, header);
  write_curve(args.out_prefix + "_pr.tsv", pr, header);
  write_auc_summary(args.out_prefix + "_auc.tsv",
                    {{"GMNB", args.generator, "roc", roc.auc, 0.0, 1},
                     {"GMNB", args.generator, "pr", pr.auc, 0.0, 1}},
                    header);
}

// --- bench ----------------------------------------------------------------------

struct BenchArgs {
  SimSpec spec;
  std::string generator = "gmnb";
  int n_runs = 20;
  std::string out_prefix;
};

void run_bench(const BenchArgs& args, const CommonOpts& opts) {
  reject_normalize(opts);
  SimSpec base = args.spec;
  base.generator = generator_from_name(args.generator);
  base.validate();
  opts.hyper.validate();
  opts.gibbs.validate();
  if (args.n_runs < 2) throw validation_error("bench: need at least 2 runs");
  const MlEstimator estimator = estimator_from_name(opts.estimator);

  std::vector<double> roc_aucs, pr_aucs;
  std::vector<AucSummaryRow> run_rows;
  double total_work = 0.0, total_seconds = 0.0;
  for (int run = 0; run < args.n_runs; ++run) {
    SimSpec spec = base;
    spec.seed = stream_key(0xb31c, base.seed, static_cast<std::uint64_t>(run));
    const LabeledDataset ds = simulate(spec);

    GibbsConfig gibbs = opts.gibbs;
    gibbs.seed = stream_key(0xb47e, base.seed, static_cast<std::uint64_t>(run));
    ThreeFits fits;
    const BfReport report =
        compute_bf_report(ds.cond1, ds.cond2, opts.hyper, gibbs, estimator, &fits);

    std::vector<double> scores;
    std::vector<bool> truth;
    for (const auto& g : report.genes) {
      scores.push_back(g.log_bf);
      // gene ids are positional in simulated data: gNNN
      const int k = std::stoi(g.gene_id.substr(1)) - 1;
      truth.push_back(ds.truth[k]);
    }
    const CurveResult roc = roc_curve(scores, truth);
    const CurveResult pr = pr_curve(scores, truth);
    roc_aucs.push_back(roc.auc);
    pr_aucs.push_back(pr.auc);
    run_rows.push_back({"GMNB", generator_name(spec.generator), "roc", roc.auc, 0.0, 1});
    run_rows.push_back({"GMNB", generator_name(spec.generator), "pr", pr.auc, 0.0, 1});

    const double cells = static_cast<double>(ds.cond1.n_genes()) * ds.cond1.n_times();
    total_work += 4.0 * cells * gibbs.total_iters;  // m0 covers two conditions
    total_seconds +=
        fits.m0.sampling_seconds + fits.m1.sampling_seconds + fits.m2.sampling_seconds;
    std::fprintf(stderr, "bench run %d/%d: roc=%.4f pr=%.4f\n", run + 1, args.n_runs, roc.auc,
                 pr.auc);
  }

  const auto [roc_mean, roc_sd] = aggregate_runs(roc_aucs);
  const auto [pr_mean, pr_sd] = aggregate_runs(pr_aucs);
  std::fprintf(stderr, "bench %s: roc=%.4f+-%.4f pr=%.4f+-%.4f rate=%.3e gene-time-iters/s\n",
               generator_name(base.generator), roc_mean, roc_sd, pr_mean, pr_sd,
               total_work / std::max(total_seconds, 1e-9));

  FileHeader header{"bench " + sim_config_string(base) + " runs=" + std::to_string(args.n_runs) +
                        " estimator=" + opts.estimator + " " +
                        gibbs_config_string(opts.gibbs, opts.hyper),
                    base.seed};
  write_auc_summary(args.out_prefix + "_auc.tsv",
                    {{"GMNB", generator_name(base.generator), "roc", roc_mean, roc_sd,
                      args.n_runs},
                     {"GMNB", generator_name(base.generator), "pr", pr_mean, pr_sd,
                      args.n_runs}},
                    header);
  write_auc_summary(args.out_prefix + "_runs.tsv", run_rows, header);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gamma-Markov negative binomial modeling of temporal count data"};
  app.set_version_flag("--version", std::string("gmnb ") + gmnb::kVersion);
  app.require_subcommand(1);

  CommonOpts opts;
  SimulateArgs sim_args;
  FitArgs fit_args;
  DeArgs de_args;
  EvalArgs eval_args;
  BenchArgs bench_args;

  auto* sim = app.add_subcommand("simulate", "Generate a labeled two-condition benchmark");
  sim->add_option("--generator", sim_args.generator, "gmnb, gp, or nbar1")->required();
  sim->add_option("--genes", sim_args.spec.n_genes, "Number of genes (default 1000)");
  sim->add_option("--de-frac", sim_args.spec.de_fraction,
                  "Fraction of truly differential genes (default 0.1)");
  sim->add_option("--reps", sim_args.spec.n_replicates, "Replicates per time point (default 4)");
  sim->add_option("--time-grid", sim_args.spec.time_grid, "Time labels (default 0,12,24,48,72)")
      ->delimiter(',');
  sim->add_option("--sf-min", sim_args.spec.size_factor_range.lo, "Size factor lower bound");
  sim->add_option("--sf-max", sim_args.spec.size_factor_range.hi, "Size factor upper bound");
  sim->add_option("--sim-dispersion", sim_args.spec.nb_dispersion,
                  "NB dispersion for gp/nbar1 count noise (default 50)");
  sim->add_option("--seed", sim_args.spec.seed, "RNG seed");
  sim->add_option("--out", sim_args.out_prefix, "Output path prefix")->required();
  add_normalize_flag(sim, opts.normalize);

  auto* fit = app.add_subcommand("fit", "Fit the model to one count matrix");
  fit->add_option("--counts", fit_args.counts_path, "Count matrix (TSV)")->required();
  fit->add_option("--meta", fit_args.meta_path, "Sample metadata (default: derived)");
  fit->add_option("--out", fit_args.out_prefix, "Output path prefix")->required();
  add_gibbs_flags(fit, opts.gibbs);
  add_hyper_flags(fit, opts.hyper);
  add_normalize_flag(fit, opts.normalize);

  auto* de = app.add_subcommand("de", "Rank genes by Bayes factor across two conditions");
  de->add_option("--cond1", de_args.cond1_path, "Condition-1 count matrix")->required();
  de->add_option("--cond2", de_args.cond2_path, "Condition-2 count matrix")->required();
  de->add_option("--meta1", de_args.meta1_path, "Condition-1 metadata (default: derived)");
  de->add_option("--meta2", de_args.meta2_path, "Condition-2 metadata (default: derived)");
  de->add_option("--estimator", opts.estimator,
                 "harmonic-mean (default) or posterior-mean-likelihood");
  de->add_option("--out", de_args.out_prefix, "Output path prefix")->required();
  add_gibbs_flags(de, opts.gibbs);
  add_hyper_flags(de, opts.hyper);
  add_normalize_flag(de, opts.normalize);

  auto* ev = app.add_subcommand("eval", "Score a ranked report against truth labels");
  ev->add_option("--report", eval_args.report_path, "Bayes-factor report")->required();
  ev->add_option("--truth", eval_args.truth_path, "Truth sidecar")->required();
  ev->add_option("--generator", eval_args.generator, "Generator tag recorded in the summary");
  ev->add_option("--out", eval_args.out_prefix, "Output path prefix")->required();
  add_normalize_flag(ev, opts.normalize);

  auto* bench = app.add_subcommand("bench", "Loop simulate -> de -> eval over seeds");
  bench->add_option("--generator", bench_args.generator, "gmnb, gp, or nbar1")->required();
  bench->add_option("--runs", bench_args.n_runs, "Number of seeded runs (default 20)");
  bench->add_option("--genes", bench_args.spec.n_genes, "Genes per run (default 1000)");
  bench->add_option("--de-frac", bench_args.spec.de_fraction, "DE fraction (default 0.1)");
  bench->add_option("--reps", bench_args.spec.n_replicates, "Replicates (default 4)");
  bench->add_option("--time-grid", bench_args.spec.time_grid, "Time labels")->delimiter(',');
  bench->add_option("--sim-dispersion", bench_args.spec.nb_dispersion,
                    "NB dispersion for gp/nbar1 count noise");
  bench->add_option("--estimator", opts.estimator,
                    "harmonic-mean (default) or posterior-mean-likelihood");
  bench->add_option("--seed", bench_args.spec.seed,
                    "Base RNG seed (per-run simulation and fit seeds derive from it)");
  bench->add_option("--out", bench_args.out_prefix, "Output path prefix")->required();
  add_gibbs_flags(bench, opts.gibbs, /*with_seed=*/false);
  add_hyper_flags(bench, opts.hyper);
  add_normalize_flag(bench, opts.normalize);

  try {
    app.parse(argc, argv);
    if (sim->parsed()) run_simulate(sim_args, opts);
    if (fit->parsed()) run_fit(fit_args, opts);
    if (de->parsed()) run_de(de_args, opts);
    if (ev->parsed()) run_eval(eval_args, opts);
    if (bench->parsed()) run_bench(bench_args, opts);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    std::cerr << "error: E_VALIDATION: bad command line (" << e.get_name() << ")\n";
    return 2;
  } catch (const gmnb::validation_error& e) {
    std::cerr << "error: E_VALIDATION: " << e.what() << "\n";
    return 2;
  } catch (const gmnb::numeric_error& e) {
    std::cerr << "error: E_NUMERIC: " << e.what() << "\n";
    return 3;
  } catch (const gmnb::io_error& e) {
    std::cerr << "error: E_IO: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: E_INTERNAL: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
