#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "netsplit/netkind.hpp"

namespace netsplit {

/// Flat ordinal for community-pair cells (k,l), 0-based, row-major.
/// Directed kinds address all K^2 ordered cells; undirected kinds address the
/// K(K+1)/2 unordered cells k <= l (queries with k > l are canonicalized).
struct CellIndexer {
  int K = 0;
  bool undirected = false;

  int count() const { return undirected ? K * (K + 1) / 2 : K * K; }

  int index(int k, int l) const {
    if (undirected) {
      const int a = k <= l ? k : l;
      const int b = k <= l ? l : k;
      return a * K - a * (a - 1) / 2 + (b - a);
    }
    return k * K + l;
  }

  std::pair<int, int> cell_at(int idx) const {
    if (!undirected) return {idx / K, idx % K};
    int a = 0, row = K;
    while (idx >= row) {
      idx -= row;
      --row;
      ++a;
    }
    return {a, a + idx};
  }

  friend bool operator==(const CellIndexer&, const CellIndexer&) = default;
};

inline std::string cell_name(std::pair<int, int> kl) {
  return "(" + std::to_string(kl.first + 1) + "," + std::to_string(kl.second + 1) + ")";
}

/// Per-cell real values. A cell may be undefined (its index set was empty);
/// reading an undefined cell is an error naming the cell. Defined values are
/// always finite.
class CellTable {
 public:
  CellTable() = default;
  explicit CellTable(CellIndexer cells)
      : cells_(cells), values_(cells.count(), 0.0), defined_(cells.count(), 0) {}

  const CellIndexer& cells() const { return cells_; }

  void set(int k, int l, double v) {
    if (!std::isfinite(v))
      throw numeric_error("non-finite cell value at " + cell_name({k, l}));
    const int i = cells_.index(k, l);
    values_[i] = v;
    defined_[i] = 1;
  }

  bool defined(int k, int l) const { return defined_[cells_.index(k, l)] != 0; }

  double at(int k, int l) const {
    const int i = cells_.index(k, l);
    if (!defined_[i])
      throw data_error("cell " + cell_name({k, l}) +
                       " is undefined (its dyad index set is empty)");
    return values_[i];
  }

  double at(int idx) const {
    auto [k, l] = cells_.cell_at(idx);
    return at(k, l);
  }

 private:
  CellIndexer cells_;
  std::vector<double> values_;
  std::vector<char> defined_;
};

/// Unit-norm coefficient vector u over cells; the selected parameter is
/// sum_{kl} u_{kl} B_{kl} (or Phi_{kl}).
class Contrast {
 public:
  Contrast() = default;

  static Contrast cell(const CellIndexer& cells, int k, int l) {
    Contrast u;
    u.cells_ = cells;
    u.coeffs_.assign(cells.count(), 0.0);
    u.coeffs_[cells.index(k, l)] = 1.0;
    return u;
  }

  /// Scales raw coefficients to unit Euclidean norm.
  static Contrast normalized(std::vector<double> raw, const CellIndexer& cells) {
    if (static_cast<int>(raw.size()) != cells.count())
      throw std::invalid_argument("contrast has " + std::to_string(raw.size()) +
                                  " coefficients, expected " + std::to_string(cells.count()));
    double norm2 = 0.0;
    for (double c : raw) {
      if (!std::isfinite(c)) throw std::invalid_argument("non-finite contrast coefficient");
      norm2 += c * c;
    }
    if (norm2 <= 0.0) throw std::invalid_argument("contrast must be nonzero");
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& c : raw) c *= inv;
    Contrast u;
    u.cells_ = cells;
    u.coeffs_ = std::move(raw);
    return u;
  }

  const CellIndexer& cells() const { return cells_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  double coeff(int k, int l) const { return coeffs_[cells_.index(k, l)]; }

  double norm() const {
    double s = 0.0;
    for (double c : coeffs_) s += c * c;
    return std::sqrt(s);
  }

  /// f(k, l, coefficient) over cells with nonzero coefficient.
  template <class F>
  void for_each_addressed(F&& f) const {
    for (int i = 0; i < static_cast<int>(coeffs_.size()); ++i) {
      if (coeffs_[i] == 0.0) continue;
      auto [k, l] = cells_.cell_at(i);
      f(k, l, coeffs_[i]);
    }
  }

 private:
  CellIndexer cells_;
  std::vector<double> coeffs_;
};

}  // namespace netsplit
