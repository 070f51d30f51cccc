#include "gmnb/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>

#include "gmnb/errors.hpp"

namespace gmnb {

namespace {

[[noreturn]] void bad_param(const char* fn, const char* what) {
  throw validation_error(std::string(fn) + ": " + what);
}

// Hoermann's PTRS transformed-rejection sampler, exact for mean >= 10.
std::int64_t poisson_ptrs(double mean, RngStream& rng) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double invalpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.uniform() - 0.5;
    const double v = rng.uniform_pos();
    const double us = 0.5 - std::abs(u);
    const auto k = static_cast<std::int64_t>(
        std::floor((2.0 * a / us + b) * u + mean + 0.43));
    if (us >= 0.07 && v <= vr) return k;
    if (k < 0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(invalpha) - std::log(a / (us * us) + b) <=
        static_cast<double>(k) * loglam - mean - std::lgamma(static_cast<double>(k) + 1.0)) {
      return k;
    }
  }
}

}  // namespace

double sample_normal(RngStream& rng) {
  // Marsaglia polar method; the second variate is discarded so the function
  // stays stateless with respect to the stream.
  for (;;) {
    const double u = 2.0 * rng.uniform() - 1.0;
    const double v = 2.0 * rng.uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

double sample_gamma(double shape, double scale, RngStream& rng) {
  if (!(shape > 0.0)) bad_param("sample_gamma", "shape must be positive");
  if (!(scale > 0.0)) bad_param("sample_gamma", "scale must be positive");
  if (shape < 1.0) return std::exp(sample_gamma_log(shape, scale, rng));

  // Marsaglia-Tsang squeeze for shape >= 1.
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / (3.0 * std::sqrt(d));
  for (;;) {
    double x, v;
    do {
      x = sample_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_pos();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v * scale;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v * scale;
  }
}

double sample_gamma_log(double shape, double scale, RngStream& rng) {
  if (!(shape > 0.0)) bad_param("sample_gamma_log", "shape must be positive");
  if (!(scale > 0.0)) bad_param("sample_gamma_log", "scale must be positive");
  if (shape >= 1.0) return std::log(sample_gamma(shape, scale, rng));
  // Boost: X = Y * U^(1/shape) with Y ~ Gamma(shape + 1). In log space the
  // U^(1/shape) factor is ln(U)/shape, which never underflows.
  const double ly = std::log(sample_gamma(shape + 1.0, 1.0, rng));
  return ly + std::log(rng.uniform_pos()) / shape + std::log(scale);
}

double sample_beta(double a, double b, RngStream& rng) {
  if (!(a > 0.0) || !(b > 0.0)) bad_param("sample_beta", "parameters must be positive");
  const double lx = sample_gamma_log(a, 1.0, rng);
  const double ly = sample_gamma_log(b, 1.0, rng);
  // p = X/(X+Y) evaluated as a logistic of the log ratio; stable for any
  // shape magnitudes.
  const double p = 1.0 / (1.0 + std::exp(ly - lx));
  const double eps = std::numeric_limits<double>::epsilon();
  return std::clamp(p, eps, 1.0 - eps);
}

std::int64_t sample_poisson(double mean, RngStream& rng) {
  if (!(mean >= 0.0) || !std::isfinite(mean))
    bad_param("sample_poisson", "mean must be finite and nonnegative");
  if (mean == 0.0) return 0;
  if (mean < 10.0) {
    // Knuth product method; e^-mean is far from underflow in this regime.
    const double limit = std::exp(-mean);
    double prod = 1.0;
    std::int64_t k = 0;
    do {
      ++k;
      prod *= rng.uniform_pos();
    } while (prod > limit);
    return k - 1;
  }
  return poisson_ptrs(mean, rng);
}

std::int64_t sample_logarithmic(double p, RngStream& rng) {
  if (!(p > 0.0 && p < 1.0)) bad_param("sample_logarithmic", "p must lie in (0,1)");
  // Sequential inversion with the pmf ratio recurrence
  // f(u+1)/f(u) = p*u/(u+1); expected number of steps is the mean.
  const double v = rng.uniform_pos();
  double pmf = -p / std::log1p(-p);
  double cdf = pmf;
  std::int64_t u = 1;
  while (v > cdf && pmf > 1e-300) {
    pmf *= p * static_cast<double>(u) / static_cast<double>(u + 1);
    ++u;
    cdf += pmf;
  }
  return u;
}

std::int64_t sample_nb_compound(double r, double p, RngStream& rng) {
  if (!(r > 0.0)) bad_param("sample_nb_compound", "r must be positive");
  if (!(p > 0.0 && p < 1.0)) bad_param("sample_nb_compound", "p must lie in (0,1)");
  const std::int64_t ell = sample_poisson(-r * std::log1p(-p), rng);
  std::int64_t n = 0;
  for (std::int64_t i = 0; i < ell; ++i) n += sample_logarithmic(p, rng);
  return n;
}

std::int64_t sample_nb(double r, double p, RngStream& rng) {
  if (!(r > 0.0)) bad_param("sample_nb", "r must be positive");
  if (!(p > 0.0 && p < 1.0)) bad_param("sample_nb", "p must lie in (0,1)");
  const double lambda = sample_gamma(r, p / (1.0 - p), rng);
  return sample_poisson(lambda, rng);
}

double crt_mean(std::int64_t n, double r) {
  if (n <= 0) return 0.0;
  return r * (boost::math::digamma(r + static_cast<double>(n)) - boost::math::digamma(r));
}

double crt_variance(std::int64_t n, double r) {
  if (n <= 0) return 0.0;
  // var = sum p_t (1 - p_t) with p_t = r/(r+t-1);
  // sum p_t^2 = r^2 (psi1(r) - psi1(r+n)).
  const double m = crt_mean(n, r);
  const double sum_p2 =
      r * r * (boost::math::trigamma(r) - boost::math::trigamma(r + static_cast<double>(n)));
  return std::max(m - sum_p2, 0.0);
}

std::int64_t sample_crt(std::int64_t n, double r, RngStream& rng,
                        std::int64_t exact_threshold) {
  if (!(r > 0.0)) bad_param("sample_crt", "r must be positive");
  if (n < 0) bad_param("sample_crt", "n must be nonnegative");
  if (n == 0) return 0;
  if (n <= exact_threshold) {
    std::int64_t l = 1;  // t = 1 is Bernoulli(r/r) = 1
    for (std::int64_t t = 2; t <= n; ++t) {
      if (rng.uniform() * (r + static_cast<double>(t - 1)) < r) ++l;
    }
    return l;
  }
  const double mean = crt_mean(n, r);
  const double sd = std::sqrt(crt_variance(n, r));
  const double draw = std::round(mean + sd * sample_normal(rng));
  const auto l = static_cast<std::int64_t>(std::clamp(draw, 1.0, static_cast<double>(n)));
  return l;
}

}  // namespace gmnb
