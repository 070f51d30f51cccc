#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gmnb/count_data.hpp"

namespace gmnb {

// One Gibbs state. Array shapes follow the count tensor: r and the
// auxiliary counts are per (gene, time); p is per (time, sample).
// Conventions: u(k, t) holds u_k^{(t)(t+1)} with u(k, T) == 0, and
// q(k, T) == 0.
struct ChainState {
  int K = 0;
  int T1 = 0;  // number of time points (T + 1)

  std::vector<double> r;                     // K x T1
  std::vector<double> c;                     // K
  std::vector<std::vector<double>> p;        // [t][j]
  std::vector<std::vector<std::int64_t>> l;  // [t] -> K x J_t
  std::vector<std::int64_t> l_dot;           // K x T1
  std::vector<std::int64_t> u;               // K x T1
  std::vector<double> q;                     // K x T1

  double& r_at(int k, int t) { return r[static_cast<std::size_t>(k) * T1 + t]; }
  double r_at(int k, int t) const { return r[static_cast<std::size_t>(k) * T1 + t]; }
  std::int64_t& l_at(int k, int t, int j) {
    return l[t][static_cast<std::size_t>(k) * p[t].size() + j];
  }
  std::int64_t l_at(int k, int t, int j) const {
    return l[t][static_cast<std::size_t>(k) * p[t].size() + j];
  }
  std::int64_t& ldot_at(int k, int t) { return l_dot[static_cast<std::size_t>(k) * T1 + t]; }
  std::int64_t ldot_at(int k, int t) const { return l_dot[static_cast<std::size_t>(k) * T1 + t]; }
  std::int64_t& u_at(int k, int t) { return u[static_cast<std::size_t>(k) * T1 + t]; }
  std::int64_t u_at(int k, int t) const { return u[static_cast<std::size_t>(k) * T1 + t]; }
  double& q_at(int k, int t) { return q[static_cast<std::size_t>(k) * T1 + t]; }
  double q_at(int k, int t) const { return q[static_cast<std::size_t>(k) * T1 + t]; }

  bool shape_matches(const CountTensor& data) const;
};

// Data-scaled default initialization: r = max(gene mean count, 1), c = 1,
// p = 0.5, auxiliaries zeroed.
ChainState init_chain_state(const CountTensor& data);

// Retained posterior snapshot (r, c, p only).
struct PosteriorDraw {
  std::vector<double> r;               // K x T1
  std::vector<double> c;               // K
  std::vector<std::vector<double>> p;  // [t][j]
};

struct PosteriorSamples {
  int K = 0;
  int T1 = 0;
  std::vector<PosteriorDraw> draws;
  std::vector<double> loglik_per_draw;           // exact data log-likelihood per draw
  std::vector<std::vector<double>> loglik_gene;  // [draw][gene] decomposition
  int burn_in = 0;
  int thin = 1;
  double sampling_seconds = 0.0;  // wall time of the sweep loop, for throughput

  int n_draws() const { return static_cast<int>(draws.size()); }
};

// Expected count r*p/(1-p); domain error outside 0 < p < 1.
double expected_count(double r, double p);

// Exact NB log-likelihood of the full tensor under one state, in log space
// via lgamma (finite for counts up to at least 1e6 by construction).
double log_likelihood(const CountTensor& data, const ChainState& state);

// Same decomposed per gene: out[k] = sum over that gene's cells.
// lgamma_n1[t] caches lgamma(n+1) per cell (same layout as data.counts);
// pass empty spans to have it computed on the fly.
void per_gene_log_likelihood(const CountTensor& data, const std::vector<double>& r,
                             const std::vector<std::vector<double>>& p,
                             std::span<double> out);

// Posterior mean and equal-tailed credible interval of r_k^(t).
struct RSummary {
  std::vector<double> mean;   // K x T1
  std::vector<double> lo;     // K x T1
  std::vector<double> hi;     // K x T1
  double level = 0.99;
};
RSummary summarize_r(const PosteriorSamples& samples, double level = 0.99);

// log( (1/n) sum exp(x_i) ), computed stably.
double log_mean_exp(std::span<const double> x);

}  // namespace gmnb
