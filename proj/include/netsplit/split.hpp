#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "netsplit/network.hpp"
#include "netsplit/rng.hpp"

namespace netsplit {

enum class SplitMode { gaussian_thin, poisson_thin, bernoulli_fission };

inline std::string to_string(SplitMode m) {
  switch (m) {
    case SplitMode::gaussian_thin: return "gaussian";
    case SplitMode::poisson_thin: return "poisson";
    case SplitMode::bernoulli_fission: return "bernoulli";
  }
  return "?";
}

inline SplitMode split_mode_for(EdgeModel m) {
  switch (m) {
    case EdgeModel::gaussian: return SplitMode::gaussian_thin;
    case EdgeModel::poisson: return SplitMode::poisson_thin;
    case EdgeModel::bernoulli: return SplitMode::bernoulli_fission;
  }
  return SplitMode::gaussian_thin;
}

/// Split parameters. epsilon/tau2 apply to the thinning modes, gamma to
/// fission; a parameter is present iff its mode requires it, and the open
/// ranges are strict (endpoints rejected).
struct SplitParams {
  SplitMode mode = SplitMode::gaussian_thin;
  double epsilon = std::numeric_limits<double>::quiet_NaN();
  double gamma = std::numeric_limits<double>::quiet_NaN();
  double tau2 = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t seed = 0;

  void validate() const {
    const bool thin = mode != SplitMode::bernoulli_fission;
    if (thin) {
      if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("epsilon must be in the open interval (0,1)");
      if (!std::isnan(gamma))
        throw std::invalid_argument("gamma applies only to bernoulli fission");
    } else {
      if (!(gamma > 0.0 && gamma < 0.5))
        throw std::invalid_argument("gamma must be in the open interval (0,0.5)");
      if (!std::isnan(epsilon) || !std::isnan(tau2))
        throw std::invalid_argument("epsilon/tau2 apply only to thinning modes");
    }
    if (mode == SplitMode::gaussian_thin && !(tau2 > 0.0))
      throw std::invalid_argument("tau2 must be > 0");
    if (mode == SplitMode::poisson_thin && !std::isnan(tau2))
      throw std::invalid_argument("tau2 applies only to gaussian thinning");
  }
};

/// Train/test pair produced by one split. Thinning: train + test == original
/// entrywise. Fission: test == original and `toggles` records the W draws.
struct SplitPair {
  Network train;
  Network test;
  SplitParams params;
  std::optional<Network> toggles;
};

namespace detail {

inline double checked_count_value(double v) {
  if (v < 0.0) throw data_error("poisson thinning: negative entry");
  if (v != std::floor(v)) throw data_error("poisson thinning: non-integer entry");
  return v;
}

inline double checked_binary_value(double v) {
  if (v != 0.0 && v != 1.0) throw data_error("bernoulli fission: entry not in {0,1}");
  return v;
}

}  // namespace detail

/// Draws train_ij ~ N(eps * A_ij, eps(1-eps) tau^2) given A and sets
/// test := A - train, so the pair sums back to A bit-exactly. Stream = dyad
/// ordinal, one normal draw per dyad.
inline SplitPair thin_gaussian(const Network& a, double epsilon, double tau2,
                               std::uint64_t seed) {
  SplitParams p{SplitMode::gaussian_thin, epsilon,
                std::numeric_limits<double>::quiet_NaN(), tau2, seed};
  p.validate();
  Network train(a.n(), a.kind(), EdgeDomain::real);
  Network test(a.n(), a.kind(), EdgeDomain::real);
  const double sd = std::sqrt(epsilon * (1.0 - epsilon) * tau2);
  a.for_each([&](std::int64_t ord, int i, int j, double v) {
    const double tr = rng::normal(seed, static_cast<std::uint64_t>(ord), 0, epsilon * v, sd);
    train.set(i, j, tr);
    test.set(i, j, v - tr);
  });
  return SplitPair{std::move(train), std::move(test), p, std::nullopt};
}

/// Draws train_ij ~ Binomial(A_ij, eps); test := A - train. Counts stay
/// nonnegative integers on both sides.
inline SplitPair thin_poisson(const Network& a, double epsilon, std::uint64_t seed) {
  SplitParams p{SplitMode::poisson_thin, epsilon, std::numeric_limits<double>::quiet_NaN(),
                std::numeric_limits<double>::quiet_NaN(), seed};
  p.validate();
  Network train(a.n(), a.kind(), EdgeDomain::count);
  Network test(a.n(), a.kind(), EdgeDomain::count);
  a.for_each([&](std::int64_t ord, int i, int j, double v) {
    const long trials = static_cast<long>(detail::checked_count_value(v));
    const long tr = rng::binomial(trials, epsilon, seed, static_cast<std::uint64_t>(ord), 0);
    train.set(i, j, static_cast<double>(tr));
    test.set(i, j, static_cast<double>(trials - tr));
  });
  return SplitPair{std::move(train), std::move(test), p, std::nullopt};
}

/// Toggles each entry independently with probability gamma: W ~ Bern(gamma),
/// train = A(1-W) + (1-A)W, test = A. The toggle draws are retained.
inline SplitPair fission_bernoulli(const Network& a, double gamma, std::uint64_t seed) {
  SplitParams p{SplitMode::bernoulli_fission, std::numeric_limits<double>::quiet_NaN(),
                gamma, std::numeric_limits<double>::quiet_NaN(), seed};
  p.validate();
  Network train(a.n(), a.kind(), EdgeDomain::binary);
  Network test(a.n(), a.kind(), EdgeDomain::binary);
  Network toggles(a.n(), a.kind(), EdgeDomain::binary);
  a.for_each([&](std::int64_t ord, int i, int j, double v) {
    detail::checked_binary_value(v);
    const double w =
        rng::uniform01(seed, static_cast<std::uint64_t>(ord), 0) < gamma ? 1.0 : 0.0;
    toggles.set(i, j, w);
    train.set(i, j, v == w ? 0.0 : 1.0);
    test.set(i, j, v);
  });
  return SplitPair{std::move(train), std::move(test), p, std::move(toggles)};
}

inline SplitPair split_network(const Network& a, const SplitParams& p) {
  p.validate();
  switch (p.mode) {
    case SplitMode::gaussian_thin: return thin_gaussian(a, p.epsilon, p.tau2, p.seed);
    case SplitMode::poisson_thin: return thin_poisson(a, p.epsilon, p.seed);
    case SplitMode::bernoulli_fission: return fission_bernoulli(a, p.gamma, p.seed);
  }
  throw std::invalid_argument("unknown split mode");
}

}  // namespace netsplit
