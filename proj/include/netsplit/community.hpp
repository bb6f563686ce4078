#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "netsplit/cells.hpp"
#include "netsplit/network.hpp"
#include "netsplit/rng.hpp"

namespace netsplit {

/// Node -> community labels, 0-based internally (files use 1-based).
struct CommunityAssignment {
  std::vector<int> labels;
  int K = 0;
};

namespace detail {

struct KmeansRun {
  std::vector<int> labels;
  double sse = std::numeric_limits<double>::infinity();
  bool valid = false;
};

/// One k-means run: k-means++ seeding, Lloyd iterations, assignment ties
/// broken by lowest cluster index. An empty cluster is re-seeded once from
/// the point farthest from its assigned center; a second occurrence fails
/// the run.
inline KmeansRun kmeans_once(const Eigen::MatrixXd& X, int K, rng::Stream& st) {
  const int n = static_cast<int>(X.rows());
  Eigen::MatrixXd centers(K, X.cols());
  std::vector<int> chosen;

  // k-means++ seeding
  chosen.push_back(static_cast<int>(st.index(static_cast<std::size_t>(n))));
  centers.row(0) = X.row(chosen[0]);
  std::vector<double> d2(n, 0.0);
  for (int c = 1; c < K; ++c) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      double best = (X.row(i) - centers.row(0)).squaredNorm();
      for (int m = 1; m < c; ++m)
        best = std::min(best, (X.row(i) - centers.row(m)).squaredNorm());
      d2[i] = best;
      total += best;
    }
    int pick = -1;
    if (total > 0.0) {
      const double target = st.uniform01() * total;
      double cum = 0.0;
      for (int i = 0; i < n; ++i) {
        cum += d2[i];
        if (cum >= target) {
          pick = i;
          break;
        }
      }
      if (pick < 0) pick = n - 1;
    } else {
      // all points coincide with chosen centers; take the first unused index
      for (int i = 0; i < n && pick < 0; ++i)
        if (std::find(chosen.begin(), chosen.end(), i) == chosen.end()) pick = i;
      if (pick < 0) pick = 0;
    }
    chosen.push_back(pick);
    centers.row(c) = X.row(pick);
  }

  KmeansRun run;
  run.labels.assign(n, 0);
  std::vector<std::int64_t> counts(K, 0);
  bool reseeded = false;

  for (int iter = 0; iter < 200; ++iter) {
    bool changed = iter == 0;
    for (int i = 0; i < n; ++i) {
      int best = 0;
      double bestd = (X.row(i) - centers.row(0)).squaredNorm();
      for (int c = 1; c < K; ++c) {
        const double d = (X.row(i) - centers.row(c)).squaredNorm();
        if (d < bestd) {
          bestd = d;
          best = c;
        }
      }
      if (run.labels[i] != best) {
        run.labels[i] = best;
        changed = true;
      }
    }
    std::fill(counts.begin(), counts.end(), 0);
    for (int i = 0; i < n; ++i) ++counts[run.labels[i]];

    if (std::find(counts.begin(), counts.end(), 0) != counts.end()) {
      if (reseeded) return run;  // invalid
      reseeded = true;
      for (int c = 0; c < K; ++c) {
        if (counts[c] != 0) continue;
        int far = 0;
        double fard = -1.0;
        for (int i = 0; i < n; ++i) {
          if (counts[run.labels[i]] <= 1) continue;  // do not empty another cluster
          const double d = (X.row(i) - centers.row(run.labels[i])).squaredNorm();
          if (d > fard) {
            fard = d;
            far = i;
          }
        }
        centers.row(c) = X.row(far);
        --counts[run.labels[far]];
        run.labels[far] = c;
        counts[c] = 1;
      }
      changed = true;
    }

    // update step
    centers.setZero();
    for (int i = 0; i < n; ++i) centers.row(run.labels[i]) += X.row(i);
    for (int c = 0; c < K; ++c)
      if (counts[c] > 0) centers.row(c) /= static_cast<double>(counts[c]);

    if (!changed) break;
  }

  std::fill(counts.begin(), counts.end(), 0);
  for (int i = 0; i < n; ++i) ++counts[run.labels[i]];
  if (std::find(counts.begin(), counts.end(), 0) != counts.end()) return run;

  run.sse = 0.0;
  for (int i = 0; i < n; ++i)
    run.sse += (X.row(i) - centers.row(run.labels[i])).squaredNorm();
  run.valid = true;
  return run;
}

}  // namespace detail

/// Adjacency spectral clustering: symmetrize, embed rows into the K
/// eigenvectors of largest |eigenvalue|, then k-means with `restarts`
/// k-means++ restarts (lowest SSE wins, ties by restart index). The
/// embedding rows are not normalized unless `normalize_rows` is set.
inline CommunityAssignment spectral_clustering(const Network& a, int K, int restarts,
                                               std::uint64_t seed,
                                               bool normalize_rows = false) {
  const int n = a.n();
  if (K < 1 || K > n) throw std::invalid_argument("spectral_clustering: K must be in [1, n]");
  if (restarts < 1) throw std::invalid_argument("spectral_clustering: restarts must be >= 1");
  if (K == 1) return CommunityAssignment{std::vector<int>(n, 0), 1};

  Eigen::MatrixXd s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j && !a.kind().loops()) {
        s(i, j) = 0.0;
        continue;
      }
      s(i, j) = a.kind().undirected() ? a.value(i, j)
                                      : 0.5 * (a.value(i, j) + a.value(j, i));
    }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  if (es.info() != Eigen::Success) throw numeric_error("eigendecomposition failed");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto& evals = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return std::fabs(evals(x)) > std::fabs(evals(y));
  });

  Eigen::MatrixXd emb(n, K);
  for (int c = 0; c < K; ++c) {
    Eigen::VectorXd v = es.eigenvectors().col(order[c]);
    // fix the sign so embeddings are reproducible
    int big = 0;
    for (int i = 1; i < n; ++i)
      if (std::fabs(v(i)) > std::fabs(v(big))) big = i;
    if (v(big) < 0.0) v = -v;
    emb.col(c) = v;
  }
  if (normalize_rows) {
    for (int i = 0; i < n; ++i) {
      const double nrm = emb.row(i).norm();
      if (nrm > 0.0) emb.row(i) /= nrm;
    }
  }

  detail::KmeansRun best;
  for (int r = 0; r < restarts; ++r) {
    rng::Stream st(seed, static_cast<std::uint64_t>(r));
    detail::KmeansRun run = detail::kmeans_once(emb, K, st);
    if (run.valid && run.sse < best.sse) best = std::move(run);
  }
  if (!best.valid)
    throw data_error("degenerate clustering: k-means produced an empty community for K=" +
                     std::to_string(K) + "; lower K");
  return CommunityAssignment{std::move(best.labels), K};
}

/// Hubert-Arabie adjusted Rand index between two labelings.
inline double adjusted_rand_index(const std::vector<int>& z1, const std::vector<int>& z2) {
  if (z1.size() != z2.size())
    throw std::invalid_argument("adjusted_rand_index: length mismatch");
  const int n = static_cast<int>(z1.size());
  const int k1 = n == 0 ? 0 : *std::max_element(z1.begin(), z1.end()) + 1;
  const int k2 = n == 0 ? 0 : *std::max_element(z2.begin(), z2.end()) + 1;
  std::vector<std::int64_t> table(static_cast<std::size_t>(k1) * k2, 0);
  for (int i = 0; i < n; ++i) {
    if (z1[i] < 0 || z2[i] < 0) throw std::invalid_argument("labels must be nonnegative");
    ++table[static_cast<std::size_t>(z1[i]) * k2 + z2[i]];
  }
  auto choose2 = [](std::int64_t m) { return static_cast<double>(m) * (m - 1) / 2.0; };
  std::vector<std::int64_t> rows(k1, 0), cols(k2, 0);
  double index = 0.0;
  for (int r = 0; r < k1; ++r)
    for (int c = 0; c < k2; ++c) {
      const std::int64_t m = table[static_cast<std::size_t>(r) * k2 + c];
      rows[r] += m;
      cols[c] += m;
      index += choose2(m);
    }
  double sum_rows = 0.0, sum_cols = 0.0;
  for (auto m : rows) sum_rows += choose2(m);
  for (auto m : cols) sum_cols += choose2(m);
  const double total = choose2(n);
  const double expected = total > 0.0 ? sum_rows * sum_cols / total : 0.0;
  const double maximum = 0.5 * (sum_rows + sum_cols);
  if (maximum == expected) return 1.0;  // both partitions trivial
  return (index - expected) / (maximum - expected);
}

/// Dyad index sets I'_{kl} induced by a labeling: every dyad of J belongs to
/// exactly one cell (for undirected kinds, the unordered pair of its
/// endpoint communities). When a binary train network is supplied, each cell
/// is additionally split into I'^(0) / I'^(1) by the train value.
struct DyadIndexSets {
  CellIndexer cells;
  std::vector<std::vector<Dyad>> full;
  std::array<std::vector<std::vector<Dyad>>, 2> by_train;
  bool has_split = false;

  std::int64_t size(int k, int l) const {
    return static_cast<std::int64_t>(full[cells.index(k, l)].size());
  }
  std::int64_t size(int k, int l, int s) const {
    return static_cast<std::int64_t>(by_train[s][cells.index(k, l)].size());
  }
};

inline DyadIndexSets dyad_index_sets(const CommunityAssignment& z, NetworkKind kind, int n,
                                     const Network* train = nullptr) {
  if (static_cast<int>(z.labels.size()) != n)
    throw std::invalid_argument("labels length does not match n");
  for (int lab : z.labels)
    if (lab < 0 || lab >= z.K) throw data_error("label out of range [1," + std::to_string(z.K) + "]");
  if (train != nullptr) {
    if (train->n() != n || !(train->kind() == kind))
      throw std::invalid_argument("train network shape does not match labels");
    if (train->domain() != EdgeDomain::binary)
      throw data_error("train-value split requires a binary network");
  }

  DyadIndexSets sets;
  sets.cells = CellIndexer{z.K, kind.undirected()};
  sets.full.assign(sets.cells.count(), {});
  sets.has_split = train != nullptr;
  if (sets.has_split) {
    sets.by_train[0].assign(sets.cells.count(), {});
    sets.by_train[1].assign(sets.cells.count(), {});
  }
  for_each_dyad(n, kind, [&](std::int64_t, int i, int j) {
    const int cell = sets.cells.index(z.labels[i], z.labels[j]);
    sets.full[cell].emplace_back(i, j);
    if (sets.has_split) {
      const int s = train->value(i, j) != 0.0 ? 1 : 0;
      sets.by_train[s][cell].emplace_back(i, j);
    }
  });
  return sets;
}

}  // namespace netsplit
