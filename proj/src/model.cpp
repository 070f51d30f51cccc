#include "gmnb/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gmnb/errors.hpp"

namespace gmnb {

namespace {

// lgamma_r keeps libm speed without the signgam global; everything we
// evaluate is positive so the sign is irrelevant.
inline double lgamma_safe(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

}  // namespace

bool ChainState::shape_matches(const CountTensor& data) const {
  if (K != data.n_genes() || T1 != data.n_times()) return false;
  if (p.size() != static_cast<std::size_t>(T1)) return false;
  for (int t = 0; t < T1; ++t)
    if (static_cast<int>(p[t].size()) != data.n_samples(t)) return false;
  return true;
}

ChainState init_chain_state(const CountTensor& data) {
  ChainState s;
  s.K = data.n_genes();
  s.T1 = data.n_times();
  s.r.assign(static_cast<std::size_t>(s.K) * s.T1, 1.0);
  s.c.assign(s.K, 1.0);
  s.p.resize(s.T1);
  s.l.resize(s.T1);
  for (int t = 0; t < s.T1; ++t) {
    s.p[t].assign(data.n_samples(t), 0.5);
    s.l[t].assign(static_cast<std::size_t>(s.K) * data.n_samples(t), 0);
  }
  s.l_dot.assign(static_cast<std::size_t>(s.K) * s.T1, 0);
  s.u.assign(static_cast<std::size_t>(s.K) * s.T1, 0);
  s.q.assign(static_cast<std::size_t>(s.K) * s.T1, 0.0);
  for (int k = 0; k < s.K; ++k) {
    const double start = std::max(data.gene_mean_count(k), 1.0);
    for (int t = 0; t < s.T1; ++t) s.r_at(k, t) = start;
  }
  return s;
}

double expected_count(double r, double p) {
  if (!(r > 0.0)) throw validation_error("expected_count: r must be positive");
  if (!(p > 0.0 && p < 1.0)) throw validation_error("expected_count: p must lie in (0,1)");
  return r * p / (1.0 - p);
}

double log_likelihood(const CountTensor& data, const ChainState& state) {
  if (!state.shape_matches(data))
    throw validation_error("log_likelihood: state dimensions do not match data");
  std::vector<double> per_gene(data.n_genes());
  per_gene_log_likelihood(data, state.r, state.p, per_gene);
  double total = 0.0;
  for (const double v : per_gene) total += v;
  return total;
}

void per_gene_log_likelihood(const CountTensor& data, const std::vector<double>& r,
                             const std::vector<std::vector<double>>& p,
                             std::span<double> out) {
  const int K = data.n_genes();
  const int T1 = data.n_times();
  if (out.size() != static_cast<std::size_t>(K))
    throw validation_error("per_gene_log_likelihood: output span size mismatch");

  std::vector<std::vector<double>> log_p(T1), log_1mp(T1);
  for (int t = 0; t < T1; ++t) {
    const int J = data.n_samples(t);
    log_p[t].resize(J);
    log_1mp[t].resize(J);
    for (int j = 0; j < J; ++j) {
      const double pj = p[t][j];
      if (!(pj > 0.0 && pj < 1.0))
        throw numeric_error("per_gene_log_likelihood: p outside (0,1)");
      log_p[t][j] = std::log(pj);
      log_1mp[t][j] = std::log1p(-pj);
    }
  }

  for (int k = 0; k < K; ++k) {
    double acc = 0.0;
    for (int t = 0; t < T1; ++t) {
      const double rkt = r[static_cast<std::size_t>(k) * T1 + t];
      const double lg_r = lgamma_safe(rkt);
      const int J = data.n_samples(t);
      for (int j = 0; j < J; ++j) {
        const auto n = static_cast<double>(data.at(k, t, j));
        acc += lgamma_safe(n + rkt) - lgamma_safe(n + 1.0) - lg_r + n * log_p[t][j] +
               rkt * log_1mp[t][j];
      }
    }
    out[k] = acc;
  }
}

RSummary summarize_r(const PosteriorSamples& samples, double level) {
  const int S = samples.n_draws();
  if (S == 0) throw validation_error("summarize_r: no draws");
  const std::size_t cells = static_cast<std::size_t>(samples.K) * samples.T1;
  RSummary out;
  out.level = level;
  out.mean.assign(cells, 0.0);
  out.lo.assign(cells, 0.0);
  out.hi.assign(cells, 0.0);
  const double tail = (1.0 - level) / 2.0;
  std::vector<double> buf(S);
  for (std::size_t i = 0; i < cells; ++i) {
    double sum = 0.0;
    for (int s = 0; s < S; ++s) {
      buf[s] = samples.draws[s].r[i];
      sum += buf[s];
    }
    out.mean[i] = sum / S;
    // equal-tailed interval from order statistics
    auto lo_it = buf.begin() + static_cast<std::ptrdiff_t>(tail * (S - 1));
    std::nth_element(buf.begin(), lo_it, buf.end());
    out.lo[i] = *lo_it;
    auto hi_it = buf.begin() + static_cast<std::ptrdiff_t>((1.0 - tail) * (S - 1) + 0.5);
    if (hi_it >= buf.end()) hi_it = buf.end() - 1;
    std::nth_element(buf.begin(), hi_it, buf.end());
    out.hi[i] = *hi_it;
  }
  return out;
}

double log_mean_exp(std::span<const double> x) {
  if (x.empty()) throw validation_error("log_mean_exp: empty input");
  double m = -std::numeric_limits<double>::infinity();
  for (const double v : x) m = std::max(m, v);
  if (!std::isfinite(m)) return m;  // all -inf (or a nan propagates)
  double acc = 0.0;
  for (const double v : x) acc += std::exp(v - m);
  return m + std::log(acc / static_cast<double>(x.size()));
}

}  // namespace gmnb
