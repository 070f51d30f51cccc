#pragma once

#include <cstdint>
#include <vector>

#include "gmnb/count_data.hpp"
#include "gmnb/distributions.hpp"
#include "gmnb/model.hpp"
#include "gmnb/rng.hpp"

namespace gmnb {

struct GibbsConfig {
  int total_iters = 2000;
  int burn_in = 1000;
  int thin = 1;
  std::uint64_t seed = 0;
  int workers = 1;
  std::int64_t crt_exact_threshold = kCrtExactThresholdDefault;

  void validate() const;  // burn_in < total_iters, thin >= 1, iters >= 1
};

// Gamma draws are floored here before they can become a shape parameter in
// the next update; a chain that visits exact zero would be absorbed.
inline constexpr double kGammaFloor = 1e-300;

// -Sum_j log(1-p_j^(t)) per time point; shared across genes within a sweep.
std::vector<double> neg_log1m_p_sums(const ChainState& state);

// One sweep is: backward_pass -> compute_q -> forward_pass -> update_c ->
// update_p. The per-gene kernels below are the building blocks; the
// whole-state wrappers match that decomposition and are what run_gibbs
// composes (with per-(iteration, gene) RNG streams).

// Backward stage, t = T..1: l ~ CRT(n, r_t), then u^{(t-1)(t)} ~
// CRT(u^{(t)(t+1)} + l_dot_t, r_{t-1}); also draws l at t = 0, which the
// forward boundary update consumes.
void backward_gene(const CountTensor& data, ChainState& s, int k, RngStream& rng,
                   std::int64_t crt_threshold);

// q recursion, t = T-1..0: q_t = A/(c_k + A) with
// A = -sum_j log(1-p_j^(t+1)) - log(1-q_{t+1}); q_T = 0.
void compute_q_gene(ChainState& s, int k, const std::vector<double>& neg_log1m_p);

// Forward stage, t = 0..T: conjugate gamma draw of r_t with rate
// theta_t = c_k - sum_j log(1-p_j^(t)) - log(1-q_t); the t = 0 boundary
// substitutes (e_init, f_init) for the nonexistent (r_{-1}, c_k).
void forward_gene(ChainState& s, int k, const GmnbHyper& hyper, RngStream& rng,
                  const std::vector<double>& neg_log1m_p);

// c_k ~ Gamma(c0 + sum_{t<T} r_t, 1/(d0 + sum_{t>0} r_t)).
void update_c_gene(ChainState& s, int k, const GmnbHyper& hyper, RngStream& rng);

// Whole-state wrappers (serial; draw order is k-major, then t, then j).
void backward_pass(const CountTensor& data, ChainState& s, RngStream& rng,
                   std::int64_t crt_threshold = kCrtExactThresholdDefault);
void compute_q(ChainState& s);
void forward_pass(ChainState& s, const GmnbHyper& hyper, RngStream& rng);
void update_c(ChainState& s, const GmnbHyper& hyper, RngStream& rng);

// p_j^(t) ~ Beta(a0 + sum_k n_kj^(t), b0 + sum_k r_k^(t)), clamped inside
// (0,1) by the beta sampler.
void update_p(const CountTensor& data, ChainState& s, const GmnbHyper& hyper, RngStream& rng);

// Full sampler. Deterministic in (data, hyper, cfg, init) regardless of
// worker count: every random draw is keyed by (seed, iteration, gene) or
// (seed, iteration) for the p block, never by scheduling. A null init uses
// the data-scaled default start.
PosteriorSamples run_gibbs(const CountTensor& data, const GmnbHyper& hyper,
                           const GibbsConfig& cfg, const ChainState* init = nullptr);

}  // namespace gmnb
