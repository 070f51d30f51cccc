#include "gmnb/bayes_factor.hpp"

#include <algorithm>
#include <cmath>

#include "gmnb/errors.hpp"

namespace gmnb {

const char* estimator_name(MlEstimator e) {
  switch (e) {
    case MlEstimator::harmonic_mean:
      return "harmonic-mean";
    case MlEstimator::posterior_mean_likelihood:
      return "posterior-mean-likelihood";
  }
  return "unknown";
}

MlEstimator estimator_from_name(const std::string& name) {
  if (name == "harmonic-mean") return MlEstimator::harmonic_mean;
  if (name == "posterior-mean-likelihood") return MlEstimator::posterior_mean_likelihood;
  throw validation_error("unknown marginal-likelihood estimator: " + name);
}

namespace {

void check_comparable(const CountTensor& a, const CountTensor& b) {
  if (a.gene_ids != b.gene_ids)
    throw validation_error("condition tensors do not share the same gene set");
  if (a.time_labels != b.time_labels)
    throw validation_error("condition tensors do not share the same time grid");
}

// Deterministic content ordering, so that swapping the condition arguments
// reproduces the exact same three fits (label symmetry holds bit-exactly).
bool tensor_content_less(const CountTensor& a, const CountTensor& b) {
  if (a.counts != b.counts) return a.counts < b.counts;
  for (int t = 0; t < a.n_times() && t < b.n_times(); ++t) {
    if (a.samples[t].size() != b.samples[t].size())
      return a.samples[t].size() < b.samples[t].size();
  }
  return false;
}

}  // namespace

CountTensor pool_conditions(const CountTensor& cond1, const CountTensor& cond2) {
  cond1.validate();
  cond2.validate();
  check_comparable(cond1, cond2);
  CountTensor pooled;
  pooled.gene_ids = cond1.gene_ids;
  pooled.time_labels = cond1.time_labels;
  const int K = cond1.n_genes();
  const int T1 = cond1.n_times();
  pooled.samples.resize(T1);
  pooled.counts.resize(T1);
  for (int t = 0; t < T1; ++t) {
    const int j1 = cond1.n_samples(t);
    const int j2 = cond2.n_samples(t);
    pooled.samples[t].reserve(j1 + j2);
    for (const auto& si : cond1.samples[t]) pooled.samples[t].push_back(si);
    for (const auto& si : cond2.samples[t]) pooled.samples[t].push_back(si);
    pooled.counts[t].resize(static_cast<std::size_t>(K) * (j1 + j2));
    for (int k = 0; k < K; ++k) {
      for (int j = 0; j < j1; ++j) pooled.at(k, t, j) = cond1.at(k, t, j);
      for (int j = 0; j < j2; ++j) pooled.at(k, t, j1 + j) = cond2.at(k, t, j);
    }
  }
  return pooled;
}

ThreeFits fit_three_models(const CountTensor& cond1, const CountTensor& cond2,
                           const GmnbHyper& hyper, const GibbsConfig& cfg) {
  if (cond2.gene_ids.empty())
    throw validation_error("fit_three_models: second condition is empty (two-condition contract)");
  if (cond1.gene_ids.empty())
    throw validation_error("fit_three_models: first condition is empty");

  // canonical order keeps every draw identical under a 1<->2 label swap
  const bool swapped = tensor_content_less(cond2, cond1);
  const CountTensor& first = swapped ? cond2 : cond1;
  const CountTensor& second = swapped ? cond1 : cond2;
  const CountTensor pooled = pool_conditions(first, second);

  ThreeFits fits;
  GibbsConfig c = cfg;
  c.seed = stream_key(0x6d30, cfg.seed);  // independently seeded runs
  fits.m0 = run_gibbs(pooled, hyper, c);
  c.seed = stream_key(0x6d31, cfg.seed);
  PosteriorSamples fit_first = run_gibbs(first, hyper, c);
  c.seed = stream_key(0x6d32, cfg.seed);
  PosteriorSamples fit_second = run_gibbs(second, hyper, c);
  fits.m1 = swapped ? std::move(fit_second) : std::move(fit_first);
  fits.m2 = swapped ? std::move(fit_first) : std::move(fit_second);
  return fits;
}

double log_marginal_likelihood(const PosteriorSamples& samples, MlEstimator method) {
  if (samples.n_draws() == 0) throw validation_error("log_marginal_likelihood: no draws");
  if (method == MlEstimator::posterior_mean_likelihood)
    return log_mean_exp(samples.loglik_per_draw);
  std::vector<double> neg(samples.loglik_per_draw.size());
  for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -samples.loglik_per_draw[i];
  return -log_mean_exp(neg);
}

std::vector<double> per_gene_log_marginal_likelihood(const PosteriorSamples& samples,
                                                     MlEstimator method) {
  const int S = samples.n_draws();
  if (S == 0) throw validation_error("per_gene_log_marginal_likelihood: no draws");
  const int K = samples.K;
  std::vector<double> out(K);
  std::vector<double> buf(S);
  for (int k = 0; k < K; ++k) {
    if (method == MlEstimator::posterior_mean_likelihood) {
      for (int s = 0; s < S; ++s) buf[s] = samples.loglik_gene[s][k];
      out[k] = log_mean_exp(buf);
    } else {
      for (int s = 0; s < S; ++s) buf[s] = -samples.loglik_gene[s][k];
      out[k] = -log_mean_exp(buf);
    }
  }
  return out;
}

void rank_genes(BfReport& report) {
  std::sort(report.genes.begin(), report.genes.end(), [](const GeneBf& a, const GeneBf& b) {
    if (a.log_bf != b.log_bf) return a.log_bf > b.log_bf;
    return a.gene_id < b.gene_id;
  });
  for (std::size_t i = 0; i < report.genes.size(); ++i)
    report.genes[i].rank = static_cast<int>(i) + 1;
}

BfReport compute_bf_report(const CountTensor& cond1, const CountTensor& cond2,
                           const GmnbHyper& hyper, const GibbsConfig& cfg,
                           MlEstimator estimator, ThreeFits* fits_out) {
  ThreeFits fits = fit_three_models(cond1, cond2, hyper, cfg);
  const auto ml0 = per_gene_log_marginal_likelihood(fits.m0, estimator);
  const auto ml1 = per_gene_log_marginal_likelihood(fits.m1, estimator);
  const auto ml2 = per_gene_log_marginal_likelihood(fits.m2, estimator);

  BfReport report;
  report.estimator = estimator;
  const int K = cond1.n_genes();
  report.genes.resize(K);
  for (int k = 0; k < K; ++k) {
    GeneBf& g = report.genes[k];
    g.gene_id = cond1.gene_ids[k];
    g.log_ml_m0 = ml0[k];
    g.log_ml_m1 = ml1[k];
    g.log_ml_m2 = ml2[k];
    g.log_bf = ml1[k] + ml2[k] - ml0[k];
    g.all_zero = cond1.gene_all_zero(k) && cond2.gene_all_zero(k);
  }
  rank_genes(report);
  if (fits_out != nullptr) *fits_out = std::move(fits);
  return report;
}

}  // namespace gmnb
