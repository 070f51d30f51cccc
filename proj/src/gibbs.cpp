#include "gmnb/gibbs.hpp"

#include <chrono>
#include <cmath>
#include <string>

#include "gmnb/errors.hpp"
#include "gmnb/parallel.hpp"

namespace gmnb {

namespace {

inline double lgamma_safe(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

// Stream tags: draws are keyed (seed, tag, iteration, gene) so that results
// do not depend on worker count or scheduling.
constexpr std::uint64_t kTagGene = 1;
constexpr std::uint64_t kTagP = 2;

}  // namespace

void GibbsConfig::validate() const {
  if (total_iters < 1) throw validation_error("gibbs config: total_iters must be >= 1");
  if (burn_in < 0 || burn_in >= total_iters)
    throw validation_error("gibbs config: burn_in must satisfy 0 <= burn_in < total_iters");
  if (thin < 1) throw validation_error("gibbs config: thin must be >= 1");
  if (workers < 1) throw validation_error("gibbs config: workers must be >= 1");
  if (crt_exact_threshold < 1)
    throw validation_error("gibbs config: crt_exact_threshold must be >= 1");
}

std::vector<double> neg_log1m_p_sums(const ChainState& state) {
  std::vector<double> sums(state.T1, 0.0);
  for (int t = 0; t < state.T1; ++t) {
    double acc = 0.0;
    for (const double pj : state.p[t]) {
      if (!(pj > 0.0 && pj < 1.0)) throw numeric_error("neg_log1m_p_sums: p outside (0,1)");
      acc -= std::log1p(-pj);
    }
    sums[t] = acc;
  }
  return sums;
}

void backward_gene(const CountTensor& data, ChainState& s, int k, RngStream& rng,
                   std::int64_t crt_threshold) {
  const int T = s.T1 - 1;
  s.u_at(k, T) = 0;
  for (int t = T; t >= 1; --t) {
    std::int64_t ldot = 0;
    const int J = data.n_samples(t);
    const double rkt = s.r_at(k, t);
    for (int j = 0; j < J; ++j) {
      const std::int64_t lkj = sample_crt(data.at(k, t, j), rkt, rng, crt_threshold);
      s.l_at(k, t, j) = lkj;
      ldot += lkj;
    }
    s.ldot_at(k, t) = ldot;
    s.u_at(k, t - 1) = sample_crt(s.u_at(k, t) + ldot, s.r_at(k, t - 1), rng, crt_threshold);
  }
  // t = 0 table counts feed the boundary update of the forward stage
  {
    std::int64_t ldot = 0;
    const int J = data.n_samples(0);
    const double rk0 = s.r_at(k, 0);
    for (int j = 0; j < J; ++j) {
      const std::int64_t lkj = sample_crt(data.at(k, 0, j), rk0, rng, crt_threshold);
      s.l_at(k, 0, j) = lkj;
      ldot += lkj;
    }
    s.ldot_at(k, 0) = ldot;
  }
}

void compute_q_gene(ChainState& s, int k, const std::vector<double>& neg_log1m_p) {
  const int T = s.T1 - 1;
  s.q_at(k, T) = 0.0;
  const double ck = s.c[k];
  for (int t = T - 1; t >= 0; --t) {
    const double a = neg_log1m_p[t + 1] - std::log1p(-s.q_at(k, t + 1));
    s.q_at(k, t) = a > 0.0 ? a / (ck + a) : 0.0;
  }
}

void forward_gene(ChainState& s, int k, const GmnbHyper& hyper, RngStream& rng,
                  const std::vector<double>& neg_log1m_p) {
  const int T = s.T1 - 1;
  for (int t = 0; t <= T; ++t) {
    const double prior_shape = (t == 0) ? hyper.e_init : s.r_at(k, t - 1);
    const double prior_rate = (t == 0) ? hyper.f_init : s.c[k];
    const double shape =
        prior_shape + static_cast<double>(s.u_at(k, t)) + static_cast<double>(s.ldot_at(k, t));
    const double theta = prior_rate + neg_log1m_p[t] - std::log1p(-s.q_at(k, t));
    if (!(theta > 0.0) || !std::isfinite(theta))
      throw numeric_error("forward pass: theta <= 0 at gene " + std::to_string(k) + ", time " +
                          std::to_string(t));
    s.r_at(k, t) = std::max(sample_gamma(shape, 1.0 / theta, rng), kGammaFloor);
  }
}

void update_c_gene(ChainState& s, int k, const GmnbHyper& hyper, RngStream& rng) {
  const int T = s.T1 - 1;
  double sum_head = 0.0, sum_tail = 0.0;
  for (int t = 0; t < T; ++t) sum_head += s.r_at(k, t);
  for (int t = 1; t <= T; ++t) sum_tail += s.r_at(k, t);
  s.c[k] = std::max(sample_gamma(hyper.c0 + sum_head, 1.0 / (hyper.d0 + sum_tail), rng),
                    kGammaFloor);
}

void backward_pass(const CountTensor& data, ChainState& s, RngStream& rng,
                   std::int64_t crt_threshold) {
  for (int k = 0; k < s.K; ++k) backward_gene(data, s, k, rng, crt_threshold);
}

void compute_q(ChainState& s) {
  const auto sums = neg_log1m_p_sums(s);
  for (int k = 0; k < s.K; ++k) compute_q_gene(s, k, sums);
}

void forward_pass(ChainState& s, const GmnbHyper& hyper, RngStream& rng) {
  const auto sums = neg_log1m_p_sums(s);
  for (int k = 0; k < s.K; ++k) forward_gene(s, k, hyper, rng, sums);
}

void update_c(ChainState& s, const GmnbHyper& hyper, RngStream& rng) {
  for (int k = 0; k < s.K; ++k) update_c_gene(s, k, hyper, rng);
}

void update_p(const CountTensor& data, ChainState& s, const GmnbHyper& hyper, RngStream& rng) {
  for (int t = 0; t < s.T1; ++t) {
    double r_sum = 0.0;
    for (int k = 0; k < s.K; ++k) r_sum += s.r_at(k, t);
    const int J = data.n_samples(t);
    for (int j = 0; j < J; ++j) {
      double n_sum = 0.0;
      for (int k = 0; k < s.K; ++k) n_sum += static_cast<double>(data.at(k, t, j));
      s.p[t][j] = sample_beta(hyper.a0 + n_sum, hyper.b0 + r_sum, rng);
    }
  }
}

PosteriorSamples run_gibbs(const CountTensor& data, const GmnbHyper& hyper,
                           const GibbsConfig& cfg, const ChainState* init) {
  data.validate();
  hyper.validate();
  cfg.validate();

  const int K = data.n_genes();
  const int T1 = data.n_times();

  ChainState s = init != nullptr ? *init : init_chain_state(data);
  if (init != nullptr && !s.shape_matches(data))
    throw validation_error("run_gibbs: initial state dimensions do not match data");

  // per-(time, sample) count column sums for the p update
  std::vector<std::vector<double>> n_colsum(T1);
  // cached lgamma(n+1) per cell for the likelihood
  std::vector<std::vector<double>> lgamma_n1(T1);
  for (int t = 0; t < T1; ++t) {
    const int J = data.n_samples(t);
    n_colsum[t].assign(J, 0.0);
    lgamma_n1[t].resize(static_cast<std::size_t>(K) * J);
    for (int k = 0; k < K; ++k) {
      for (int j = 0; j < J; ++j) {
        const auto n = static_cast<double>(data.at(k, t, j));
        n_colsum[t][j] += n;
        lgamma_n1[t][static_cast<std::size_t>(k) * J + j] = lgamma_safe(n + 1.0);
      }
    }
  }

  PosteriorSamples out;
  out.K = K;
  out.T1 = T1;
  out.burn_in = cfg.burn_in;
  out.thin = cfg.thin;
  const int retained = (cfg.total_iters - cfg.burn_in - 1) / cfg.thin + 1;
  out.draws.reserve(retained);
  out.loglik_per_draw.reserve(retained);
  out.loglik_gene.reserve(retained);

  std::vector<double> gene_loglik(K);
  std::vector<std::vector<double>> log_p(T1), log_1mp(T1);

  const auto t_start = std::chrono::steady_clock::now();

  for (int iter = 0; iter < cfg.total_iters; ++iter) {
    const auto p_sums = neg_log1m_p_sums(s);
    try {
      parallel_for(K, cfg.workers, [&](int k) {
        RngStream rng(cfg.seed, stream_key(kTagGene, static_cast<std::uint64_t>(iter),
                                           static_cast<std::uint64_t>(k)));
        backward_gene(data, s, k, rng, cfg.crt_exact_threshold);
        compute_q_gene(s, k, p_sums);
        forward_gene(s, k, hyper, rng, p_sums);
        update_c_gene(s, k, hyper, rng);
      });
    } catch (const numeric_error& e) {
      throw numeric_error("iteration " + std::to_string(iter) + ": " + e.what());
    }

    {
      RngStream rng(cfg.seed, stream_key(kTagP, static_cast<std::uint64_t>(iter)));
      for (int t = 0; t < T1; ++t) {
        double r_sum = 0.0;  // reduced in fixed gene order
        for (int k = 0; k < K; ++k) r_sum += s.r_at(k, t);
        const int J = data.n_samples(t);
        for (int j = 0; j < J; ++j)
          s.p[t][j] = sample_beta(hyper.a0 + n_colsum[t][j], hyper.b0 + r_sum, rng);
      }
    }

    const bool retain = iter >= cfg.burn_in && (iter - cfg.burn_in) % cfg.thin == 0;
    if (!retain) continue;

    for (int t = 0; t < T1; ++t) {
      const int J = data.n_samples(t);
      log_p[t].resize(J);
      log_1mp[t].resize(J);
      for (int j = 0; j < J; ++j) {
        log_p[t][j] = std::log(s.p[t][j]);
        log_1mp[t][j] = std::log1p(-s.p[t][j]);
      }
    }
    parallel_for(K, cfg.workers, [&](int k) {
      double acc = 0.0;
      for (int t = 0; t < T1; ++t) {
        const double rkt = s.r_at(k, t);
        const double lg_r = lgamma_safe(rkt);
        const int J = data.n_samples(t);
        const std::size_t row = static_cast<std::size_t>(k) * J;
        for (int j = 0; j < J; ++j) {
          const auto n = static_cast<double>(data.at(k, t, j));
          acc += lgamma_safe(n + rkt) - lgamma_n1[t][row + j] - lg_r + n * log_p[t][j] +
                 rkt * log_1mp[t][j];
        }
      }
      gene_loglik[k] = acc;
    });

    PosteriorDraw draw;
    draw.r = s.r;
    draw.c = s.c;
    draw.p = s.p;
    out.draws.push_back(std::move(draw));
    double total = 0.0;
    for (const double v : gene_loglik) total += v;
    out.loglik_per_draw.push_back(total);
    out.loglik_gene.push_back(gene_loglik);
  }

  out.sampling_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return out;
}

}  // namespace gmnb
