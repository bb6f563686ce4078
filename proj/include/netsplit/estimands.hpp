#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "netsplit/cells.hpp"
#include "netsplit/community.hpp"
#include "netsplit/network.hpp"

namespace netsplit::estimands {

/// Odds-shift link: expit(logit(a) + log v), computed in odds form
/// a*v / ((1-a) + a*v) so values near 0 or 1 do not cancel.
/// Satisfies f(f(a,v), 1/v) = a and f(a,1) = a.
inline double link_f(double a, double v) {
  if (!(a > 0.0 && a < 1.0)) throw data_error("link_f: first argument must be in (0,1)");
  if (!(v > 0.0)) throw data_error("link_f: odds factor must be > 0");
  if (v == 1.0) return a;
  return a * v / ((1.0 - a) + a * v);
}

namespace detail {

inline void check_gamma(double gamma) {
  // The fission *splitter* rejects the endpoint; the estimand algebra is
  // well defined at gamma = 0.5 (where T = M exactly) and is used there.
  if (!(gamma > 0.0 && gamma <= 0.5))
    throw std::invalid_argument("gamma must be in (0, 0.5]");
}

inline double checked_prob(double m, int i, int j) {
  if (!(m > 0.0 && m < 1.0))
    throw data_error("mean entry M(" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                     ") = " + std::to_string(m) + " is outside (0,1)");
  return m;
}

inline void check_same_shape(const MeanMatrix& m, const Network& train) {
  if (m.n() != train.n() || !(m.kind() == train.kind()))
    throw std::invalid_argument("mean matrix and train network shapes differ");
  if (train.domain() != EdgeDomain::binary)
    throw data_error("train network must be binary");
}

}  // namespace detail

/// Per-dyad conditional means T_ij = E[A_ij^te | A_ij^tr]:
/// f(M, (1-gamma)/gamma) where the train entry is 1, f(M, gamma/(1-gamma))
/// where it is 0.
inline netsplit::detail::DyadGrid conditional_means_T(const MeanMatrix& m, const Network& train,
                                                      double gamma) {
  detail::check_gamma(gamma);
  detail::check_same_shape(m, train);
  netsplit::detail::DyadGrid t(m.n(), m.kind());
  const double v1 = (1.0 - gamma) / gamma;
  const double v0 = gamma / (1.0 - gamma);
  m.for_each([&](std::int64_t, int i, int j, double mij) {
    detail::checked_prob(mij, i, j);
    t.put(i, j, link_f(mij, train.value(i, j) != 0.0 ? v1 : v0));
  });
  return t;
}

/// Cell means B_kl = mean of M over I'_{kl}. Cells with empty index sets are
/// left undefined; reading one errors naming the cell.
inline CellTable cell_means_B(const MeanMatrix& m, const DyadIndexSets& sets) {
  CellTable b(sets.cells);
  for (int idx = 0; idx < sets.cells.count(); ++idx) {
    const auto& dyads = sets.full[idx];
    if (dyads.empty()) continue;
    double sum = 0.0;
    for (const auto& [i, j] : dyads) sum += m.value(i, j);
    auto [k, l] = sets.cells.cell_at(idx);
    b.set(k, l, sum / static_cast<double>(dyads.size()));
  }
  return b;
}

/// B^{(s)}_kl = mean of M over I'^{(s)}_{kl}, s in {0,1}.
inline std::array<CellTable, 2> cell_means_B_split(const MeanMatrix& m,
                                                   const DyadIndexSets& sets) {
  if (!sets.has_split)
    throw std::invalid_argument("cell_means_B_split: index sets carry no train split");
  std::array<CellTable, 2> out{CellTable(sets.cells), CellTable(sets.cells)};
  for (int s = 0; s < 2; ++s)
    for (int idx = 0; idx < sets.cells.count(); ++idx) {
      const auto& dyads = sets.by_train[s][idx];
      if (dyads.empty()) continue;
      double sum = 0.0;
      for (const auto& [i, j] : dyads) sum += m.value(i, j);
      auto [k, l] = sets.cells.cell_at(idx);
      out[s].set(k, l, sum / static_cast<double>(dyads.size()));
    }
  return out;
}

/// Selected parameter theta = sum_kl u_kl B_kl over the addressed cells.
inline double theta(const MeanMatrix& m, const DyadIndexSets& sets, const Contrast& u) {
  double out = 0.0;
  u.for_each_addressed([&](int k, int l, double c) {
    const auto& dyads = sets.full[sets.cells.index(k, l)];
    if (dyads.empty())
      throw data_error("theta: addressed cell " + cell_name({k, l}) + " is empty");
    double sum = 0.0;
    for (const auto& [i, j] : dyads) sum += m.value(i, j);
    out += c * sum / static_cast<double>(dyads.size());
  });
  return out;
}

inline double theta(const MeanMatrix& m, const CommunityAssignment& z, const Contrast& u,
                    NetworkKind kind) {
  return theta(m, dyad_index_sets(z, kind, m.n()), u);
}

struct SurrogateTables {
  CellTable v_all;  // V_kl: mean of T over I'_{kl}
  CellTable v0;     // V^(0)_kl
  CellTable v1;     // V^(1)_kl
  CellTable phi;    // odds-transformed surrogate; defined where both (s)-cells are
};

/// Phi_kl = (|I0|/|I|) f(V0, (1-g)/g) + (|I1|/|I|) f(V1, g/(1-g)).
inline SurrogateTables surrogate_phi(const MeanMatrix& m, const Network& train, double gamma,
                                     const DyadIndexSets& sets) {
  detail::check_gamma(gamma);
  if (!sets.has_split)
    throw std::invalid_argument("surrogate_phi: index sets carry no train split");
  const auto t = conditional_means_T(m, train, gamma);
  SurrogateTables out{CellTable(sets.cells), CellTable(sets.cells), CellTable(sets.cells),
                      CellTable(sets.cells)};
  const double v_up = (1.0 - gamma) / gamma;
  const double v_down = gamma / (1.0 - gamma);
  for (int idx = 0; idx < sets.cells.count(); ++idx) {
    auto [k, l] = sets.cells.cell_at(idx);
    const auto mean_t = [&](const std::vector<Dyad>& dyads) {
      double sum = 0.0;
      for (const auto& [i, j] : dyads) sum += t.at(i, j);
      return sum / static_cast<double>(dyads.size());
    };
    if (!sets.full[idx].empty()) out.v_all.set(k, l, mean_t(sets.full[idx]));
    const auto& d0 = sets.by_train[0][idx];
    const auto& d1 = sets.by_train[1][idx];
    if (!d0.empty()) out.v0.set(k, l, mean_t(d0));
    if (!d1.empty()) out.v1.set(k, l, mean_t(d1));
    if (d0.empty() || d1.empty()) continue;
    const double total = static_cast<double>(d0.size() + d1.size());
    const double phi = (static_cast<double>(d0.size()) / total) * link_f(out.v0.at(k, l), v_up) +
                       (static_cast<double>(d1.size()) / total) * link_f(out.v1.at(k, l), v_down);
    out.phi.set(k, l, phi);
  }
  return out;
}

/// xi = sum_kl u_kl Phi_kl.
inline double xi(const CellTable& phi, const Contrast& u) {
  double out = 0.0;
  u.for_each_addressed([&](int k, int l, double c) { out += c * phi.at(k, l); });
  return out;
}

struct TaylorGap {
  CellTable leading;  // (1 - g/(1-g)) (H0 - H1) / |I'|
  CellTable exact;    // Phi - B, computed directly
};

/// First-order expansion of the Phi - B gap, with H^(s) the within-(s)-cell
/// sum of squared deviations of M from B^(s).
inline TaylorGap taylor_gap_leading(const MeanMatrix& m, const Network& train, double gamma,
                                    const DyadIndexSets& sets) {
  const auto phi = surrogate_phi(m, train, gamma, sets);
  const auto b = cell_means_B(m, sets);
  const auto bs = cell_means_B_split(m, sets);
  TaylorGap out{CellTable(sets.cells), CellTable(sets.cells)};
  const double scale = 1.0 - gamma / (1.0 - gamma);
  for (int idx = 0; idx < sets.cells.count(); ++idx) {
    auto [k, l] = sets.cells.cell_at(idx);
    if (!phi.phi.defined(k, l)) continue;
    double h[2] = {0.0, 0.0};
    for (int s = 0; s < 2; ++s) {
      const double center = bs[s].at(k, l);
      for (const auto& [i, j] : sets.by_train[s][idx]) {
        const double d = m.value(i, j) - center;
        h[s] += d * d;
      }
    }
    out.leading.set(k, l, scale * (h[0] - h[1]) / static_cast<double>(sets.full[idx].size()));
    out.exact.set(k, l, phi.phi.at(k, l) - b.at(k, l));
  }
  return out;
}

/// Limit of Phi as gamma -> 0: per cell, the |I^(s)|-weighted mix of
/// expit(log L^(s)), where L^(0) is the arithmetic and L^(1) the harmonic
/// mean of the odds M/(1-M) over the respective (s)-cell.
inline CellTable gamma_zero_limit(const MeanMatrix& m, const Network& train,
                                  const DyadIndexSets& sets) {
  detail::check_same_shape(m, train);
  if (!sets.has_split)
    throw std::invalid_argument("gamma_zero_limit: index sets carry no train split");
  CellTable out(sets.cells);
  for (int idx = 0; idx < sets.cells.count(); ++idx) {
    const auto& d0 = sets.by_train[0][idx];
    const auto& d1 = sets.by_train[1][idx];
    if (d0.empty() || d1.empty()) continue;
    double sum_odds = 0.0;
    for (const auto& [i, j] : d0) {
      const double mij = detail::checked_prob(m.value(i, j), i, j);
      sum_odds += mij / (1.0 - mij);
    }
    const double lambda0 = sum_odds / static_cast<double>(d0.size());
    double sum_inv_odds = 0.0;
    for (const auto& [i, j] : d1) {
      const double mij = detail::checked_prob(m.value(i, j), i, j);
      sum_inv_odds += (1.0 - mij) / mij;
    }
    const double lambda1 = static_cast<double>(d1.size()) / sum_inv_odds;
    const double total = static_cast<double>(d0.size() + d1.size());
    auto [k, l] = sets.cells.cell_at(idx);
    out.set(k, l, (static_cast<double>(d0.size()) / total) * (lambda0 / (1.0 + lambda0)) +
                      (static_cast<double>(d1.size()) / total) * (lambda1 / (1.0 + lambda1)));
  }
  return out;
}

}  // namespace netsplit::estimands
