#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>

#include "netsplit/community.hpp"
#include "netsplit/estimands.hpp"
#include "netsplit/network.hpp"
#include "netsplit/result.hpp"
#include "netsplit/rng.hpp"
#include "netsplit/split.hpp"

namespace netsplit {

namespace detail {

inline void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("alpha must be in the open interval (0,1)");
}

inline double z_quantile(double alpha) { return rng::normal_icdf(1.0 - alpha / 2.0); }

/// Test-network means over the full cells; empty cells stay undefined.
inline CellTable cell_means_network(const Network& net, const DyadIndexSets& sets) {
  CellTable b(sets.cells);
  for (int idx = 0; idx < sets.cells.count(); ++idx) {
    const auto& dyads = sets.full[idx];
    if (dyads.empty()) continue;
    double sum = 0.0;
    for (const auto& [i, j] : dyads) sum += net.value(i, j);
    auto [k, l] = sets.cells.cell_at(idx);
    b.set(k, l, sum / static_cast<double>(dyads.size()));
  }
  return b;
}

inline void finish_interval(InferenceResult& r, double alpha) {
  if (!std::isfinite(r.estimate) || !std::isfinite(r.std_error))
    throw numeric_error("non-finite estimate or standard error");
  const double z = z_quantile(alpha);
  r.level = 1.0 - alpha;
  r.lower = r.estimate - z * r.std_error;
  r.upper = r.estimate + z * r.std_error;
}

}  // namespace detail

/// Exact interval for theta(A^tr) from a Gaussian test network:
///   theta_hat = (1-eps)^{-1} sum u_kl Bhat_kl,
///   sigma^2   = (1-eps)^{-1} tau^2 sum u_kl^2 / |I'_{kl}|.
inline InferenceResult infer_gaussian(const Network& test, const CommunityAssignment& z,
                                      const Contrast& u, double epsilon, double tau2,
                                      double alpha) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("epsilon must be in the open interval (0,1)");
  if (!(tau2 > 0.0)) throw std::invalid_argument("tau2 must be > 0");
  detail::check_alpha(alpha);
  const auto sets = dyad_index_sets(z, test.kind(), test.n());
  InferenceResult r;
  r.model = EdgeModel::gaussian;
  r.target = TargetKind::theta;
  r.split_param = epsilon;
  r.contrast = u.coeffs();
  r.b_hat = detail::cell_means_network(test, sets);
  const double scale = 1.0 / (1.0 - epsilon);
  double est = 0.0, var = 0.0;
  u.for_each_addressed([&](int k, int l, double c) {
    const auto count = sets.size(k, l);
    if (count == 0)
      throw data_error("addressed cell " + cell_name({k, l}) + " is empty");
    est += c * r.b_hat.at(k, l);
    var += c * c / static_cast<double>(count);
  });
  r.estimate = scale * est;
  r.std_error = std::sqrt(scale * tau2 * var);
  detail::finish_interval(r, alpha);
  return r;
}

/// Asymptotic interval for theta(A^tr) from a Poisson test network:
///   sigma_hat^2 = (1-eps)^{-2} sum u_kl^2 Bhat_kl / |I'_{kl}|.
/// An all-zero addressed cell contributes zero variance (warned).
inline InferenceResult infer_poisson(const Network& test, const CommunityAssignment& z,
                                     const Contrast& u, double epsilon, double alpha) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::invalid_argument("epsilon must be in the open interval (0,1)");
  detail::check_alpha(alpha);
  const auto sets = dyad_index_sets(z, test.kind(), test.n());
  InferenceResult r;
  r.model = EdgeModel::poisson;
  r.target = TargetKind::theta;
  r.split_param = epsilon;
  r.contrast = u.coeffs();
  r.b_hat = detail::cell_means_network(test, sets);
  const double scale = 1.0 / (1.0 - epsilon);
  double est = 0.0, var = 0.0;
  u.for_each_addressed([&](int k, int l, double c) {
    const auto count = sets.size(k, l);
    if (count == 0)
      throw data_error("addressed cell " + cell_name({k, l}) + " is empty");
    const double bhat = r.b_hat.at(k, l);
    if (bhat == 0.0)
      r.warnings.push_back("cell " + cell_name({k, l}) +
                           " has zero test mean; its variance contribution is zero");
    est += c * bhat;
    var += c * c * bhat / static_cast<double>(count);
  });
  r.estimate = scale * est;
  r.std_error = scale * std::sqrt(var);
  detail::finish_interval(r, alpha);
  return r;
}

namespace detail {

/// Delta-method variance of Vhat^(s), with the two numerical safeguards:
/// (b) a test mean of exactly 0 or 1 re-enters the numerator as
///     eta = 1/(2|I^(s)|); (a) the result is capped at 0.25, the largest
///     variance of any [0,1]-supported distribution.
inline double delta_hat_s(double bhat, std::int64_t count, double ec, bool& clamped,
                          bool& degenerate) {
  double numer_b = bhat;
  if (bhat == 0.0 || bhat == 1.0) {
    degenerate = true;
    numer_b = 1.0 / (2.0 * static_cast<double>(count));
  }
  const double denom_core = (1.0 - bhat) * ec + bhat;
  const double pow4 = denom_core * denom_core * denom_core * denom_core;
  double d = numer_b * (1.0 - numer_b) * ec * ec / (static_cast<double>(count) * pow4);
  if (d > 0.25) {
    clamped = true;
    d = 0.25;
  }
  return d;
}

}  // namespace detail

/// Asymptotic interval for xi(A^tr) from a fissioned Bernoulli pair:
///   Vhat^(s) = Bhat^(s) / (Bhat^(s) + (1-Bhat^(s)) e^{c^(s)}),
///   c^(0) = log(g/(1-g)), c^(1) = -c^(0),
///   Phihat = |I0|/|I| Vhat^0 + |I1|/|I| Vhat^1,  xi_hat = sum u Phihat,
///   Delta^(s) via the delta method with the numerical safeguards below, and
///   sigma_hat^2 = sum u^2 sum_s (|I^(s)|/|I|)^2 Delta^(s).
inline InferenceResult infer_bernoulli(const Network& test, const Network& train,
                                       const CommunityAssignment& z, const Contrast& u,
                                       double gamma, double alpha) {
  if (!(gamma > 0.0 && gamma < 0.5))
    throw std::invalid_argument("gamma must be in the open interval (0,0.5)");
  detail::check_alpha(alpha);
  if (test.domain() != EdgeDomain::binary) throw data_error("test network must be binary");
  const auto sets = dyad_index_sets(z, test.kind(), test.n(), &train);

  InferenceResult r;
  r.model = EdgeModel::bernoulli;
  r.target = TargetKind::xi;
  r.split_param = gamma;
  r.contrast = u.coeffs();
  r.b_hat = detail::cell_means_network(test, sets);
  CellTable bhat_s[2] = {CellTable(sets.cells), CellTable(sets.cells)};
  CellTable phihat(sets.cells), deltahat(sets.cells);
  const double ec[2] = {gamma / (1.0 - gamma), (1.0 - gamma) / gamma};

  for (int idx = 0; idx < sets.cells.count(); ++idx) {
    auto [k, l] = sets.cells.cell_at(idx);
    const std::int64_t n0 = sets.size(k, l, 0);
    const std::int64_t n1 = sets.size(k, l, 1);
    if (n0 == 0 || n1 == 0) continue;
    const double total = static_cast<double>(n0 + n1);
    double vhat[2], dhat[2];
    bool clamped = false, degenerate = false;
    for (int s = 0; s < 2; ++s) {
      const auto& dyads = sets.by_train[s][idx];
      double sum = 0.0;
      for (const auto& [i, j] : dyads) sum += test.value(i, j);
      const double b = sum / static_cast<double>(dyads.size());
      bhat_s[s].set(k, l, b);
      vhat[s] = b / (b + (1.0 - b) * ec[s]);
      dhat[s] = detail::delta_hat_s(b, static_cast<std::int64_t>(dyads.size()), ec[s],
                                    clamped, degenerate);
    }
    const double w0 = static_cast<double>(n0) / total;
    const double w1 = static_cast<double>(n1) / total;
    phihat.set(k, l, w0 * vhat[0] + w1 * vhat[1]);
    deltahat.set(k, l, w0 * w0 * dhat[0] + w1 * w1 * dhat[1]);
    if (degenerate)
      r.warnings.push_back("cell " + cell_name({k, l}) +
                           ": boundary test mean; variance recomputed with eta");
    if (clamped)
      r.warnings.push_back("cell " + cell_name({k, l}) + ": variance estimate capped at 0.25");
  }

  double est = 0.0, var = 0.0;
  u.for_each_addressed([&](int k, int l, double c) {
    if (sets.size(k, l, 0) == 0 || sets.size(k, l, 1) == 0)
      throw data_error("addressed cell " + cell_name({k, l}) +
                       " has an empty train-value slice; re-fission or merge cells");
    est += c * phihat.at(k, l);
    var += c * c * deltahat.at(k, l);
  });
  r.estimate = est;
  r.std_error = std::sqrt(var);
  r.b_hat0 = std::move(bhat_s[0]);
  r.b_hat1 = std::move(bhat_s[1]);
  r.delta_hat = std::move(deltahat);
  detail::finish_interval(r, alpha);
  return r;
}

/// Naive comparator: communities estimated from A itself, interval built
/// from A with no selection adjustment and no safeguards.
inline InferenceResult infer_naive(const Network& a, const CommunityAssignment& z_from_a,
                                   const Contrast& u, EdgeModel model, double alpha,
                                   double tau2 = std::numeric_limits<double>::quiet_NaN()) {
  detail::check_alpha(alpha);
  if (model == EdgeModel::gaussian && !(tau2 > 0.0))
    throw std::invalid_argument("tau2 must be > 0 for the gaussian naive interval");
  const auto sets = dyad_index_sets(z_from_a, a.kind(), a.n());
  InferenceResult r;
  r.model = model;
  r.target = TargetKind::naive;
  r.split_param = 0.0;
  r.contrast = u.coeffs();
  r.b_hat = detail::cell_means_network(a, sets);
  double est = 0.0, var = 0.0;
  u.for_each_addressed([&](int k, int l, double c) {
    const auto count = sets.size(k, l);
    if (count == 0)
      throw data_error("addressed cell " + cell_name({k, l}) + " is empty");
    const double bhat = r.b_hat.at(k, l);
    est += c * bhat;
    switch (model) {
      case EdgeModel::gaussian: var += c * c * tau2 / static_cast<double>(count); break;
      case EdgeModel::poisson: var += c * c * bhat / static_cast<double>(count); break;
      case EdgeModel::bernoulli:
        var += c * c * bhat * (1.0 - bhat) / static_cast<double>(count);
        break;
    }
  });
  r.estimate = est;
  r.std_error = std::sqrt(var);
  detail::finish_interval(r, alpha);
  return r;
}

struct PipelineResult {
  SplitPair split;
  CommunityAssignment communities;
  InferenceResult inference;
};

/// Steps I-III: split A, cluster the train network, infer on the test
/// network conditional on the train. The split and clustering seeds are
/// independent.
inline PipelineResult run_pipeline(const Network& a, const SplitParams& params, int K,
                                   const Contrast& u, double alpha, int restarts,
                                   std::uint64_t cluster_seed) {
  PipelineResult out{split_network(a, params), {}, {}};
  out.communities = spectral_clustering(out.split.train, K, restarts, cluster_seed);
  switch (params.mode) {
    case SplitMode::gaussian_thin:
      out.inference = infer_gaussian(out.split.test, out.communities, u, params.epsilon,
                                     params.tau2, alpha);
      break;
    case SplitMode::poisson_thin:
      out.inference =
          infer_poisson(out.split.test, out.communities, u, params.epsilon, alpha);
      break;
    case SplitMode::bernoulli_fission:
      out.inference = infer_bernoulli(out.split.test, out.split.train, out.communities, u,
                                      params.gamma, alpha);
      break;
  }
  return out;
}

}  // namespace netsplit
