#pragma once

#include <cstdint>

#include "gmnb/rng.hpp"

namespace gmnb {

// Random-variate primitives for the sampler. All are pure functions of
// (parameters, stream); concurrent callers must own distinct streams.

double sample_normal(RngStream& rng);

// Gamma(shape, scale), mean shape*scale. Shapes below 1 go through a
// boosted draw computed in log space, so tiny shapes cannot stall the
// rejection loop; the returned value may underflow to 0 for shape << 1.
double sample_gamma(double shape, double scale, RngStream& rng);

// ln(X) for X ~ Gamma(shape, scale). Exact for all shape > 0; this is the
// underflow-safe route for small shapes (the linear-domain draw is just
// exp() of this value).
double sample_gamma_log(double shape, double scale, RngStream& rng);

// Beta(a, b) via two log-gamma draws; result clamped inside (0, 1) at
// machine-epsilon scale so that log(1-p) stays finite downstream.
double sample_beta(double a, double b, RngStream& rng);

std::int64_t sample_poisson(double mean, RngStream& rng);

// Logarithmic series variable, pmf -p^u / (u ln(1-p)), u = 1, 2, ...
std::int64_t sample_logarithmic(double p, RngStream& rng);

// NB(r, p) through the compound-Poisson construction: a Pois(-r ln(1-p))
// number of logarithmic summands.
std::int64_t sample_nb_compound(double r, double p, RngStream& rng);

// NB(r, p) through the gamma-Poisson mixture. Kept as an independent route
// from sample_nb_compound; the two are cross-checked in tests.
std::int64_t sample_nb(double r, double p, RngStream& rng);

// Chinese Restaurant Table count: l = sum_{t=1..n} Bernoulli(r/(r+t-1)).
// Support: 0 for n = 0, otherwise [1, n]. Above `exact_threshold` the
// Bernoulli sum is replaced by a moment-matched normal draw rounded and
// clamped to [1, n]; raw counts can exceed 1e5 and the exact sum is O(n).
inline constexpr std::int64_t kCrtExactThresholdDefault = 10000;
std::int64_t sample_crt(std::int64_t n, double r, RngStream& rng,
                        std::int64_t exact_threshold = kCrtExactThresholdDefault);

// Exact mean and variance of CRT(n, r); digamma/trigamma forms, used by the
// normal approximation and exposed for tests.
double crt_mean(std::int64_t n, double r);
double crt_variance(std::int64_t n, double r);

}  // namespace gmnb
