#include "gmnb/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>


#include "gmnb/distributions.hpp"
#include "gmnb/errors.hpp"
#include "gmnb/rng.hpp"

namespace gmnb {

const char* generator_name(Generator g) {
  switch (g) {
    case Generator::gmnb:
      return "gmnb";
    case Generator::gp:
      return "gp";
    case Generator::nbar1:
      return "nbar1";
  }
  return "unknown";
}

Generator generator_from_name(const std::string& name) {
  if (name == "gmnb") return Generator::gmnb;
  if (name == "gp") return Generator::gp;
  if (name == "nbar1") return Generator::nbar1;
  throw validation_error("unknown generator: " + name);
}

double SimSpec::resolved_nb_dispersion() const {
  if (nb_dispersion > 0.0) return nb_dispersion;
  return generator == Generator::nbar1 ? 100.0 : 50.0;
}

void SimSpec::validate() const {
  if (n_genes < 1) throw validation_error("sim spec: n_genes must be >= 1");
  if (!(de_fraction >= 0.0 && de_fraction < 1.0))
    throw validation_error("sim spec: de_fraction must lie in [0,1)");
  if (de_fraction > 0.0 && std::llround(de_fraction * n_genes) < 1)
    throw validation_error("sim spec: de_fraction * n_genes rounds to zero DE genes");
  if (n_replicates < 1) throw validation_error("sim spec: n_replicates must be >= 1");
  if (time_grid.size() < 1) throw validation_error("sim spec: time grid is empty");
  for (std::size_t t = 1; t < time_grid.size(); ++t)
    if (!(time_grid[t] > time_grid[t - 1]))
      throw validation_error("sim spec: time grid must be strictly increasing");
  auto check_interval = [](const Interval& iv, const char* what) {
    if (!(iv.lo > 0.0) || !(iv.hi >= iv.lo))
      throw validation_error(std::string("sim spec: invalid range for ") + what);
  };
  check_interval(size_factor_range, "size factors");
  check_interval(gmnb_c_range, "gmnb c");
  check_interval(gmnb_e_range, "gmnb e");
  check_interval(gp_mean_range, "gp mean");
  check_interval(gp_theta_range, "gp theta");
  check_interval(gp_alpha_range, "gp alpha");
  check_interval(ar_beta_range, "ar beta");
  check_interval(ar_phi_range, "ar phi");
  if (!(ar_phi_range.hi < 1.0)) throw validation_error("sim spec: ar phi range must stay below 1");
  if (nb_dispersion != 0.0 && !(nb_dispersion > 0.0))
    throw validation_error("sim spec: nb_dispersion must be positive (or 0 for the default)");
  if (!(gmnb_r0_scale > 0.0)) throw validation_error("sim spec: gmnb_r0_scale must be positive");
}

namespace {

constexpr std::uint64_t kTagDataset = 0x5349;  // dataset-level draws
constexpr std::uint64_t kTagGene = 0x53c7;     // per-gene draws

std::string gene_name(int k, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "g%0*d", width, k + 1);
  return buf;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Scaffold {
  LabeledDataset ds;
  std::vector<bool> de;
};

// Shared setup: gene ids, empty per-condition tensors, size factors per
// sample, and the random DE subset of round(de_fraction * K) genes.
Scaffold make_scaffold(const SimSpec& spec) {
  Scaffold sc;
  const int K = spec.n_genes;
  const int T1 = static_cast<int>(spec.time_grid.size());
  const int width = std::max(4, static_cast<int>(std::to_string(K).size()));

  auto init_tensor = [&](CountTensor& ct, int condition) {
    ct.time_labels = spec.time_grid;
    ct.gene_ids.resize(K);
    for (int k = 0; k < K; ++k) ct.gene_ids[k] = gene_name(k, width);
    ct.samples.resize(T1);
    ct.counts.resize(T1);
    for (int t = 0; t < T1; ++t) {
      ct.samples[t].resize(spec.n_replicates);
      for (int j = 0; j < spec.n_replicates; ++j) {
        SampleInfo& si = ct.samples[t][j];
        si.condition = condition;
        si.replicate = j + 1;
        si.column_name = "t" + std::to_string(t) + "_r" + std::to_string(j + 1);
      }
      ct.counts[t].assign(static_cast<std::size_t>(K) * spec.n_replicates, 0);
    }
  };
  init_tensor(sc.ds.cond1, 1);
  init_tensor(sc.ds.cond2, 2);

  RngStream rng(spec.seed, stream_key(kTagDataset));

  auto draw_sf = [&](std::vector<std::vector<double>>& sf) {
    sf.resize(T1);
    for (int t = 0; t < T1; ++t) {
      sf[t].resize(spec.n_replicates);
      for (int j = 0; j < spec.n_replicates; ++j)
        sf[t][j] = rng.uniform(spec.size_factor_range.lo, spec.size_factor_range.hi);
    }
  };
  draw_sf(sc.ds.sf_cond1);
  draw_sf(sc.ds.sf_cond2);

  // random subset of DE genes via partial Fisher-Yates
  const auto n_de = static_cast<int>(std::llround(spec.de_fraction * K));
  std::vector<int> idx(K);
  std::iota(idx.begin(), idx.end(), 0);
  for (int i = 0; i < n_de; ++i) {
    const int pick = i + static_cast<int>(rng.uniform() * (K - i));
    std::swap(idx[i], idx[std::min(pick, K - 1)]);
  }
  sc.de.assign(K, false);
  for (int i = 0; i < n_de; ++i) sc.de[idx[i]] = true;

  sc.ds.truth = sc.de;
  sc.ds.records.resize(K);
  return sc;
}

// NB draw with the given mean and dispersion: variance = mean + mean^2/disp.
std::int64_t nb_from_mean(double mean, double disp, RngStream& rng) {
  if (!(mean > 0.0)) return 0;
  const double p = mean / (mean + disp);
  return sample_nb(disp, p, rng);
}

// Dense Cholesky for the small GP covariance; jitter escalated on failure.
std::vector<double> cholesky(std::vector<double> a, int n, double jitter_scale) {
  double jitter = 1e-10 * jitter_scale;
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<double> m = a;
    for (int i = 0; i < n; ++i) m[i * n + i] += jitter;
    bool ok = true;
    for (int i = 0; i < n && ok; ++i) {
      for (int j = 0; j <= i; ++j) {
        double s = m[i * n + j];
        for (int k = 0; k < j; ++k) s -= m[i * n + k] * m[j * n + k];
        if (i == j) {
          if (!(s > 0.0)) {
            ok = false;
            break;
          }
          m[i * n + i] = std::sqrt(s);
        } else {
          m[i * n + j] = s / m[j * n + j];
        }
      }
    }
    if (ok) {
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) m[i * n + j] = 0.0;
      return m;
    }
    jitter *= 100.0;
  }
  throw numeric_error("gp covariance is not positive definite after jitter");
}

}  // namespace

namespace {

std::string fmt_traj(const std::vector<double>& v) {
  std::string out = "traj=";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += fmt(v[i]);
  }
  return out;
}

}  // namespace

LabeledDataset simulate_gmnb(const SimSpec& spec) {
  spec.validate();
  Scaffold sc = make_scaffold(spec);
  const int K = spec.n_genes;
  const int T1 = static_cast<int>(spec.time_grid.size());

  for (int k = 0; k < K; ++k) {
    RngStream rng(spec.seed, stream_key(kTagGene, static_cast<std::uint64_t>(k)));
    const double e_k = rng.uniform(spec.gmnb_e_range.lo, spec.gmnb_e_range.hi);
    const double r0 = sample_gamma(e_k, spec.gmnb_r0_scale, rng);  // shared across conditions
    const double c1 = rng.uniform(spec.gmnb_c_range.lo, spec.gmnb_c_range.hi);
    double c2 = c1;
    if (sc.de[k]) c2 = c1 + (c1 < 1.0 ? spec.gmnb_c_shift : -spec.gmnb_c_shift);

    // a null gene carries the identical latent trajectory in both
    // conditions; a perturbed gene evolves its own chain under c + b
    auto build_trajectory = [&](double c) {
      std::vector<double> r(T1);
      r[0] = r0;
      for (int t = 1; t < T1; ++t)
        r[t] = std::max(sample_gamma(r[t - 1], 1.0 / c, rng), 1e-300);
      return r;
    };
    const auto traj1 = build_trajectory(c1);
    const auto traj2 = sc.de[k] ? build_trajectory(c2) : traj1;

    auto emit = [&](CountTensor& ct, const std::vector<std::vector<double>>& sf,
                    const std::vector<double>& traj) {
      for (int t = 0; t < T1; ++t)
        for (int j = 0; j < spec.n_replicates; ++j) {
          const double s = sf[t][j];
          ct.at(k, t, j) = sample_nb(traj[t], s / (1.0 + s), rng);
        }
    };
    emit(sc.ds.cond1, sc.ds.sf_cond1, traj1);
    emit(sc.ds.cond2, sc.ds.sf_cond2, traj2);

    sc.ds.records[k].is_de = sc.de[k];
    sc.ds.records[k].params_cond1 =
        "e=" + fmt(e_k) + ";r0=" + fmt(r0) + ";c=" + fmt(c1) + ";" + fmt_traj(traj1);
    sc.ds.records[k].params_cond2 = "c=" + fmt(c2) + ";" + fmt_traj(traj2);
  }
  return sc.ds;
}

std::vector<double> gp_covariance(const std::vector<double>& time_grid, double theta,
                                  double alpha) {
  // distances over time rescaled to [0,1]; raw-hour distances with alpha in
  // [0.5,1] would decorrelate everything beyond adjacent points and turn
  // trajectories into white noise
  const int T1 = static_cast<int>(time_grid.size());
  const double span = time_grid.back() - time_grid.front();
  std::vector<double> tau(T1);
  for (int t = 0; t < T1; ++t)
    tau[t] = span > 0.0 ? (time_grid[t] - time_grid.front()) / span : 0.0;
  std::vector<double> cov(static_cast<std::size_t>(T1) * T1);
  for (int i = 0; i < T1; ++i)
    for (int j = 0; j < T1; ++j)
      cov[i * T1 + j] = theta * std::exp(-std::abs(tau[i] - tau[j]) / (2.0 * alpha));
  return cov;
}

LabeledDataset simulate_gp(const SimSpec& spec) {
  spec.validate();
  Scaffold sc = make_scaffold(spec);
  const int K = spec.n_genes;
  const int T1 = static_cast<int>(spec.time_grid.size());

  // a null gene reuses the identical trajectory draw in both conditions; a
  // perturbed gene draws its own trajectory under the modified parameters
  auto draw_trajectory = [&](double m, double theta, double alpha, RngStream& rng) {
    const auto cov = gp_covariance(spec.time_grid, theta, alpha);
    const auto chol = cholesky(cov, T1, theta);
    std::vector<double> z(T1), mu(T1);
    for (auto& v : z) v = sample_normal(rng);
    for (int i = 0; i < T1; ++i) {
      double acc = m;
      for (int j = 0; j <= i; ++j) acc += chol[i * T1 + j] * z[j];
      mu[i] = std::max(acc, 1.0);  // NB needs a positive mean
    }
    return mu;
  };

  for (int k = 0; k < K; ++k) {
    RngStream rng(spec.seed, stream_key(kTagGene, static_cast<std::uint64_t>(k)));
    const double m1 = rng.uniform(spec.gp_mean_range.lo, spec.gp_mean_range.hi);
    const double th1 = rng.uniform(spec.gp_theta_range.lo, spec.gp_theta_range.hi);
    const double al1 = rng.uniform(spec.gp_alpha_range.lo, spec.gp_alpha_range.hi);

    const auto mu1 = draw_trajectory(m1, th1, al1, rng);
    std::vector<double> mu2 = mu1;
    double m2 = m1, th2 = th1, al2 = al1;
    if (sc.de[k]) {
      m2 = spec.gp_mean_mult * m1;
      th2 = spec.gp_theta_mult * th1;
      const double mid = 0.5 * (spec.gp_alpha_range.lo + spec.gp_alpha_range.hi);
      al2 = al1 + (al1 <= mid ? spec.gp_alpha_shift : -spec.gp_alpha_shift);
      mu2 = draw_trajectory(m2, th2, al2, rng);
    }

    auto emit = [&](CountTensor& ct, const std::vector<std::vector<double>>& sf,
                    const std::vector<double>& mu) {
      for (int t = 0; t < T1; ++t)
        for (int j = 0; j < spec.n_replicates; ++j)
          ct.at(k, t, j) = nb_from_mean(mu[t] * sf[t][j], spec.resolved_nb_dispersion(), rng);
    };
    emit(sc.ds.cond1, sc.ds.sf_cond1, mu1);
    emit(sc.ds.cond2, sc.ds.sf_cond2, mu2);

    sc.ds.records[k].is_de = sc.de[k];
    sc.ds.records[k].params_cond1 =
        "m=" + fmt(m1) + ";theta=" + fmt(th1) + ";alpha=" + fmt(al1) + ";" + fmt_traj(mu1);
    sc.ds.records[k].params_cond2 =
        "m=" + fmt(m2) + ";theta=" + fmt(th2) + ";alpha=" + fmt(al2) + ";" + fmt_traj(mu2);
  }
  return sc.ds;
}

LabeledDataset simulate_nbar1(const SimSpec& spec) {
  spec.validate();
  Scaffold sc = make_scaffold(spec);
  const int K = spec.n_genes;
  const int T1 = static_cast<int>(spec.time_grid.size());

  for (int k = 0; k < K; ++k) {
    RngStream rng(spec.seed, stream_key(kTagGene, static_cast<std::uint64_t>(k)));
    const double beta = rng.uniform(spec.ar_beta_range.lo, spec.ar_beta_range.hi);
    const double phi1 = rng.uniform(spec.ar_phi_range.lo, spec.ar_phi_range.hi);
    double phi2 = phi1;
    if (sc.de[k]) phi2 = phi1 <= 0.5 ? 1.5 * phi1 : (2.0 / 3.0) * phi1;

    // both conditions run the AR recursion on the same white-noise
    // innovations, so a null gene has the identical omega path and a
    // perturbed gene differs exactly through phi
    std::vector<double> eps(T1);
    for (auto& v : eps) v = sample_normal(rng);

    auto build_trajectory = [&](double phi) {
      std::vector<double> mu(T1);
      // start at the stationary distribution to avoid a transient at t = 0
      double omega = eps[0] / std::sqrt(1.0 - phi * phi);
      mu[0] = std::exp(omega + beta);
      for (int t = 1; t < T1; ++t) {
        omega = phi * omega + eps[t];
        mu[t] = std::exp(omega + beta);
      }
      return mu;
    };
    const auto mu1 = build_trajectory(phi1);
    const auto mu2 = sc.de[k] ? build_trajectory(phi2) : mu1;

    auto emit = [&](CountTensor& ct, const std::vector<std::vector<double>>& sf,
                    const std::vector<double>& mu) {
      for (int t = 0; t < T1; ++t)
        for (int j = 0; j < spec.n_replicates; ++j)
          ct.at(k, t, j) = nb_from_mean(mu[t] * sf[t][j], spec.resolved_nb_dispersion(), rng);
    };
    emit(sc.ds.cond1, sc.ds.sf_cond1, mu1);
    emit(sc.ds.cond2, sc.ds.sf_cond2, mu2);

    sc.ds.records[k].is_de = sc.de[k];
    sc.ds.records[k].params_cond1 =
        "beta=" + fmt(beta) + ";phi=" + fmt(phi1) + ";" + fmt_traj(mu1);
    sc.ds.records[k].params_cond2 = "phi=" + fmt(phi2) + ";" + fmt_traj(mu2);
  }
  return sc.ds;
}

LabeledDataset simulate(const SimSpec& spec) {
  switch (spec.generator) {
    case Generator::gmnb:
      return simulate_gmnb(spec);
    case Generator::gp:
      return simulate_gp(spec);
    case Generator::nbar1:
      return simulate_nbar1(spec);
  }
  throw validation_error("simulate: unknown generator");
}

}  // namespace gmnb
