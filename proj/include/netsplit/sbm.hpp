#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "netsplit/network.hpp"
#include "netsplit/rng.hpp"

namespace netsplit {

/// Planted stochastic block model: K_true equally-sized communities, mean
/// rho1 on same-community dyads and rho2 across communities.
struct SbmConfig {
  int n = 0;
  int k_true = 1;
  double rho1 = 0.0;
  double rho2 = 0.0;
  EdgeModel model = EdgeModel::gaussian;
  double tau2 = std::numeric_limits<double>::quiet_NaN();
  NetworkKind kind = kDirectedLoops;

  void validate() const {
    if (n < 1 || k_true < 1) throw std::invalid_argument("n and k_true must be >= 1");
    if (n % k_true != 0)
      throw std::invalid_argument("n=" + std::to_string(n) +
                                  " is not divisible by k_true=" + std::to_string(k_true));
    if (model == EdgeModel::bernoulli &&
        !(rho1 > 0.0 && rho1 < 1.0 && rho2 > 0.0 && rho2 < 1.0))
      throw std::invalid_argument("bernoulli connectivities must be in (0,1)");
    if (model == EdgeModel::poisson && !(rho1 > 0.0 && rho2 > 0.0))
      throw std::invalid_argument("poisson connectivities must be > 0");
    if (model == EdgeModel::gaussian && !(tau2 > 0.0))
      throw std::invalid_argument("tau2 must be > 0 for gaussian edges");
  }
};

struct SbmTruth {
  MeanMatrix mean;
  std::vector<int> labels;
};

inline SbmTruth sbm_mean_matrix(const SbmConfig& cfg) {
  cfg.validate();
  const int block = cfg.n / cfg.k_true;
  std::vector<int> labels(cfg.n);
  for (int i = 0; i < cfg.n; ++i) labels[i] = i / block;
  MeanMatrix m(cfg.n, cfg.kind);
  m.for_each([&](std::int64_t, int i, int j, double) {
    m.set(i, j, labels[i] == labels[j] ? cfg.rho1 : cfg.rho2);
  });
  return SbmTruth{std::move(m), std::move(labels)};
}

inline MeanMatrix constant_mean_matrix(int n, NetworkKind kind, double value) {
  MeanMatrix m(n, kind);
  m.for_each([&](std::int64_t, int i, int j, double) { m.set(i, j, value); });
  return m;
}

/// Two equal halves with `within` on same-half dyads, `between` otherwise.
inline MeanMatrix two_block_mean_matrix(int n, NetworkKind kind, double within,
                                        double between) {
  MeanMatrix m(n, kind);
  const int half = n / 2;
  m.for_each([&](std::int64_t, int i, int j, double) {
    m.set(i, j, (i < half) == (j < half) ? within : between);
  });
  return m;
}

/// Independent M_ij ~ Unif(lo, hi) per dyad.
inline MeanMatrix uniform_mean_matrix(int n, NetworkKind kind, double lo, double hi,
                                      std::uint64_t seed) {
  if (!(hi > lo)) throw std::invalid_argument("uniform mean range must have hi > lo");
  MeanMatrix m(n, kind);
  m.for_each([&](std::int64_t ord, int i, int j, double) {
    m.set(i, j, lo + (hi - lo) * rng::uniform01(seed, static_cast<std::uint64_t>(ord), 0));
  });
  return m;
}

/// One independent draw per dyad in J from the edge model at mean M_ij.
inline Network sample_network(const MeanMatrix& m, EdgeModel model, double tau2,
                              std::uint64_t seed) {
  if (model == EdgeModel::gaussian && !(tau2 > 0.0))
    throw std::invalid_argument("tau2 must be > 0 for gaussian sampling");
  Network a(m.n(), m.kind(), domain_for(model));
  m.for_each([&](std::int64_t ord, int i, int j, double mij) {
    const auto stream = static_cast<std::uint64_t>(ord);
    switch (model) {
      case EdgeModel::gaussian:
        a.set(i, j, rng::normal(seed, stream, 0, mij, std::sqrt(tau2)));
        break;
      case EdgeModel::poisson:
        if (!(mij > 0.0)) throw data_error("poisson mean must be > 0");
        a.set(i, j, static_cast<double>(rng::poisson(mij, seed, stream, 0)));
        break;
      case EdgeModel::bernoulli:
        if (!(mij > 0.0 && mij < 1.0)) throw data_error("bernoulli mean must be in (0,1)");
        a.set(i, j, rng::uniform01(seed, stream, 0) < mij ? 1.0 : 0.0);
        break;
    }
  });
  return a;
}

}  // namespace netsplit
