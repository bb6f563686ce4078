#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "netsplit/netkind.hpp"

namespace netsplit::rng {

/// Identifier of the pinned generator stack, reported by `--version`.
/// Streams are keyed hashes (no sequential state), so draws for disjoint
/// (stream, counter) pairs can be produced in any order on any thread.
inline constexpr const char* kGeneratorName = "splitmix64-ctr+as241";

inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// One 64-bit word fully determined by (seed, stream, counter).
inline std::uint64_t keyed_u64(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  std::uint64_t h = splitmix64(seed ^ 0xA3C59AC2F0534855ull);
  h = splitmix64(h ^ splitmix64(stream ^ 0x1B56C4E9F0285D21ull));
  h = splitmix64(h ^ splitmix64(counter ^ 0x6C62272E07BB0142ull));
  return h;
}

/// Derives an independent seed; used for per-replicate and per-purpose keys.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(base ^ splitmix64(index ^ 0x9E6C63D0876A9A47ull));
}

/// Maps 64 random bits into the open interval (0,1).
inline double unit_double(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return unit_double(keyed_u64(seed, stream, counter));
}

/// Inverse standard normal CDF, Wichura's algorithm AS241 (PPND16).
/// Absolute error below 1e-15 over (0,1); the pinned quantile/sampling method.
inline double normal_icdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_icdf: p must be in (0,1)");
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e3 * r + 3.3430575583588128105e4) * r +
                 6.7265770927008700853e4) * r + 4.5921953931549871457e4) * r +
               1.3731693765509461125e4) * r + 1.9715909503065514427e3) * r +
             1.3314166789178437745e2) * r + 3.3871328727963666080e0) /
           (((((((5.2264952788528545610e3 * r + 2.8729085735721942674e4) * r +
                 3.9307895800092710610e4) * r + 2.1213794301586595867e4) * r +
               5.3941960214247511077e3) * r + 6.8718700749205790830e2) * r +
             4.2313330701600911252e1) * r + 1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e0) * r +
                3.64784832476320460504e0) * r + 5.76949722146069140550e0) * r +
              4.63033784615654529590e0) * r + 1.42343711074968357734e0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e0) * r +
              2.05319162663775882187e0) * r + 1.0);
  } else {
    r -= 5.0;
    value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e0) * r +
              5.46378491116411436990e0) * r + 6.65790464350110377720e0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -value : value;
}

inline double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter,
                     double mean, double sd) {
  return mean + sd * normal_icdf(uniform01(seed, stream, counter));
}

namespace detail {

/// CDF inversion for Binomial(trials, p) with trials <= 64; one uniform.
inline long binomial_inverse_small(long trials, double p, double u) {
  if (trials == 0) return 0;
  const double q = 1.0 - p;
  double pmf = std::pow(q, static_cast<double>(trials));
  double cdf = pmf;
  long k = 0;
  while (cdf < u && k < trials) {
    pmf *= (static_cast<double>(trials - k) / static_cast<double>(k + 1)) * (p / q);
    ++k;
    cdf += pmf;
  }
  return k;
}

/// CDF inversion for Poisson(mean) with mean <= 60; one uniform.
inline long poisson_inverse_small(double mean, double u) {
  double pmf = std::exp(-mean);
  double cdf = pmf;
  long k = 0;
  const long cap = static_cast<long>(mean + 60.0 * std::sqrt(mean) + 60.0);
  while (cdf < u && k < cap) {
    ++k;
    pmf *= mean / static_cast<double>(k);
    cdf += pmf;
  }
  return k;
}

}  // namespace detail

/// Exact Binomial(trials, p) draw. Trials are split into chunks of at most 64
/// so the pmf recurrence never underflows; chunk c consumes counter+c.
inline long binomial(long trials, double p, std::uint64_t seed, std::uint64_t stream,
                     std::uint64_t counter) {
  if (trials < 0) throw data_error("binomial: negative trial count");
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return 0;
    if (p == 1.0) return trials;
    throw std::invalid_argument("binomial: p must be in [0,1]");
  }
  long total = 0;
  std::uint64_t c = counter;
  for (long remaining = trials; remaining > 0;) {
    const long m = remaining < 64 ? remaining : 64;
    total += detail::binomial_inverse_small(m, p, uniform01(seed, stream, c++));
    remaining -= m;
  }
  return total;
}

/// Exact Poisson(mean) draw; means above 60 are split into equal chunks
/// (a sum of independent Poissons), chunk c consuming counter+c.
inline long poisson(double mean, std::uint64_t seed, std::uint64_t stream,
                    std::uint64_t counter) {
  if (!(mean >= 0.0)) throw std::invalid_argument("poisson: mean must be >= 0");
  if (mean == 0.0) return 0;
  const long chunks = static_cast<long>(std::ceil(mean / 60.0));
  const double part = mean / static_cast<double>(chunks);
  long total = 0;
  for (long c = 0; c < chunks; ++c)
    total += detail::poisson_inverse_small(part, uniform01(seed, stream, counter + static_cast<std::uint64_t>(c)));
  return total;
}

/// Sequential draws from one (seed, stream) pair; counter advances per draw.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64() { return keyed_u64(seed_, stream_, counter_++); }
  double uniform01() { return unit_double(next_u64()); }
  double normal(double mean, double sd) { return mean + sd * normal_icdf(uniform01()); }

  /// Uniform index in [0, n).
  std::size_t index(std::size_t n) {
    const auto k = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
    return k >= n ? n - 1 : k;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace netsplit::rng
