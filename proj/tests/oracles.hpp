// Test-only oracles, kept independent of the library's computation paths:
// brute-force double loops over raw labels, joint-pmf enumeration, and
// pair-counting. Used to freeze expected values.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "netsplit/netkind.hpp"
#include "netsplit/network.hpp"

namespace oracles {

// Is the ordered pair (i,j) a member of J for this kind, as stored? For
// undirected kinds only i<=j (or i<j) count; mirrors are the same dyad.
inline bool in_stored_j(int i, int j, netsplit::NetworkKind kind) {
  if (i == j && !kind.loops()) return false;
  if (kind.undirected() && i > j) return false;
  return true;
}

// Average of values(i,j) over dyads of J whose endpoint communities form the
// cell (k,l); for undirected kinds the unordered pair {z_i, z_j} is compared
// against {k, l}.
inline double cell_mean(const std::function<double(int, int)>& value,
                        const std::vector<int>& labels, netsplit::NetworkKind kind, int k,
                        int l, const std::function<bool(int, int)>& keep = nullptr) {
  const int n = static_cast<int>(labels.size());
  double sum = 0.0;
  long count = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (!in_stored_j(i, j, kind)) continue;
      int zi = labels[i], zj = labels[j];
      if (kind.undirected() && zi > zj) std::swap(zi, zj);
      if (zi != k || zj != l) continue;
      if (keep && !keep(i, j)) continue;
      sum += value(i, j);
      ++count;
    }
  if (count == 0) return std::numeric_limits<double>::quiet_NaN();
  return sum / static_cast<double>(count);
}

// P(A = 1 | A^tr = s) by enumerating the joint pmf of (A, W) under
// A ~ Bern(m), W ~ Bern(gamma), train = A(1-W) + (1-A)W. No odds algebra.
inline double bayes_T(double m, double gamma, int s) {
  double num = 0.0, den = 0.0;
  for (int a = 0; a <= 1; ++a)
    for (int w = 0; w <= 1; ++w) {
      const int train = a == 1 ? 1 - w : w;
      if (train != s) continue;
      const double p = (a == 1 ? m : 1.0 - m) * (w == 1 ? gamma : 1.0 - gamma);
      den += p;
      if (a == 1) num += p;
    }
  return num / den;
}

// P(A^tr = 1) by the same enumeration.
inline double bayes_train_one(double m, double gamma) {
  double p = 0.0;
  for (int a = 0; a <= 1; ++a)
    for (int w = 0; w <= 1; ++w) {
      const int train = a == 1 ? 1 - w : w;
      if (train != 1) continue;
      p += (a == 1 ? m : 1.0 - m) * (w == 1 ? gamma : 1.0 - gamma);
    }
  return p;
}

// Adjusted Rand index from pair counts over all C(n,2) item pairs.
inline double pair_count_ari(const std::vector<int>& z1, const std::vector<int>& z2) {
  const int n = static_cast<int>(z1.size());
  double n11 = 0, n10 = 0, n01 = 0, n00 = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const bool s1 = z1[i] == z1[j];
      const bool s2 = z2[i] == z2[j];
      if (s1 && s2) ++n11;
      else if (s1) ++n10;
      else if (s2) ++n01;
      else ++n00;
    }
  const double denom = (n11 + n10) * (n10 + n00) + (n11 + n01) * (n01 + n00);
  if (denom == 0.0) return 1.0;
  return 2.0 * (n11 * n00 - n10 * n01) / denom;
}

// Exact Binomial(n, p) pmf by the multiplicative recurrence.
inline std::vector<double> binomial_pmf(int n, double p) {
  std::vector<double> pmf(n + 1);
  pmf[0] = std::pow(1.0 - p, n);
  for (int k = 0; k < n; ++k)
    pmf[k + 1] = pmf[k] * (static_cast<double>(n - k) / (k + 1)) * (p / (1.0 - p));
  return pmf;
}

}  // namespace oracles
