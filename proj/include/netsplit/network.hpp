#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "netsplit/netkind.hpp"

namespace netsplit {

namespace detail {

/// Dense per-dyad storage over J. Undirected kinds keep the canonical
/// (i <= j) cell and mirror on access; cells outside J are unreachable.
class DyadGrid {
 public:
  DyadGrid() = default;
  DyadGrid(int n, NetworkKind kind)
      : n_(n), kind_(kind), values_(static_cast<std::size_t>(n) * n, 0.0) {
    if (n < 1) throw std::invalid_argument("network size must be >= 1");
  }

  int n() const { return n_; }
  NetworkKind kind() const { return kind_; }

  double at(int i, int j) const {
    check(i, j);
    auto [a, b] = kind_.canonical(i, j);
    return values_[static_cast<std::size_t>(a) * n_ + b];
  }

  void put(int i, int j, double v) {
    check(i, j);
    auto [a, b] = kind_.canonical(i, j);
    values_[static_cast<std::size_t>(a) * n_ + b] = v;
  }

  std::int64_t size() const { return dyad_count(n_, kind_); }

  template <class F>
  void for_each(F&& f) const {
    for_each_dyad(n_, kind_, [&](std::int64_t ord, int i, int j) {
      f(ord, i, j, values_[static_cast<std::size_t>(kind_.canonical(i, j).first) * n_ +
                           kind_.canonical(i, j).second]);
    });
  }

  friend bool operator==(const DyadGrid& x, const DyadGrid& y) {
    if (x.n_ != y.n_ || !(x.kind_ == y.kind_)) return false;
    bool same = true;
    x.for_each([&](std::int64_t, int i, int j, double v) {
      if (v != y.at(i, j)) same = false;
    });
    return same;
  }

 private:
  void check(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_)
      throw data_error("dyad (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                       ") out of range for n=" + std::to_string(n_));
    if (!kind_.addresses(i, j))
      throw data_error("dyad (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                       ") is a self-loop, which kind " + to_string(kind_) + " disallows");
  }

  int n_ = 0;
  NetworkKind kind_{};
  std::vector<double> values_;
};

}  // namespace detail

enum class EdgeDomain { real, count, binary };

inline std::string to_string(EdgeDomain d) {
  switch (d) {
    case EdgeDomain::real: return "real";
    case EdgeDomain::count: return "count";
    case EdgeDomain::binary: return "binary";
  }
  return "?";
}

inline EdgeDomain parse_domain(const std::string& token) {
  if (token == "real") return EdgeDomain::real;
  if (token == "count") return EdgeDomain::count;
  if (token == "binary") return EdgeDomain::binary;
  throw std::invalid_argument("unknown edge domain '" + token + "' (expected real|count|binary)");
}

/// Edge distribution family. Fixes the natural edge domain.
enum class EdgeModel { gaussian, poisson, bernoulli };

inline EdgeDomain domain_for(EdgeModel m) {
  switch (m) {
    case EdgeModel::gaussian: return EdgeDomain::real;
    case EdgeModel::poisson: return EdgeDomain::count;
    case EdgeModel::bernoulli: return EdgeDomain::binary;
  }
  return EdgeDomain::real;
}

inline std::string to_string(EdgeModel m) {
  switch (m) {
    case EdgeModel::gaussian: return "gaussian";
    case EdgeModel::poisson: return "poisson";
    case EdgeModel::bernoulli: return "bernoulli";
  }
  return "?";
}

inline EdgeModel parse_model(const std::string& token) {
  if (token == "gaussian") return EdgeModel::gaussian;
  if (token == "poisson") return EdgeModel::poisson;
  if (token == "bernoulli") return EdgeModel::bernoulli;
  throw std::invalid_argument("unknown edge model '" + token +
                              "' (expected gaussian|poisson|bernoulli)");
}

/// Adjacency matrix over the active dyad set J. Immutable by convention once
/// populated; value(j,i) of an undirected network returns value(i,j).
class Network {
 public:
  Network() = default;
  Network(int n, NetworkKind kind, EdgeDomain domain)
      : grid_(n, kind), domain_(domain) {}

  int n() const { return grid_.n(); }
  NetworkKind kind() const { return grid_.kind(); }
  EdgeDomain domain() const { return domain_; }

  double value(int i, int j) const { return grid_.at(i, j); }

  void set(int i, int j, double v) {
    validate_value(v);
    grid_.put(i, j, v);
  }

  std::int64_t dyad_total() const { return grid_.size(); }

  /// f(ordinal, i, j, value) over J in row-major order.
  template <class F>
  void for_each(F&& f) const {
    grid_.for_each(std::forward<F>(f));
  }

  friend bool operator==(const Network& x, const Network& y) {
    return x.domain_ == y.domain_ && x.grid_ == y.grid_;
  }

 private:
  void validate_value(double v) const {
    if (!std::isfinite(v)) throw numeric_error("non-finite edge value");
    switch (domain_) {
      case EdgeDomain::real:
        return;
      case EdgeDomain::count:
        if (v < 0 || v != std::floor(v))
          throw data_error("count-domain edge value " + std::to_string(v) +
                           " is not a nonnegative integer");
        return;
      case EdgeDomain::binary:
        if (v != 0.0 && v != 1.0)
          throw data_error("binary-domain edge value " + std::to_string(v) + " is not 0/1");
        return;
    }
  }

  detail::DyadGrid grid_;
  EdgeDomain domain_ = EdgeDomain::real;
};

/// Mean matrix M over J: E[A_ij]. Same shape contract as Network. Domain
/// bounds (Bernoulli in (0,1), Poisson > 0) are checked where consumed.
class MeanMatrix {
 public:
  MeanMatrix() = default;
  MeanMatrix(int n, NetworkKind kind) : grid_(n, kind) {}

  int n() const { return grid_.n(); }
  NetworkKind kind() const { return grid_.kind(); }
  double value(int i, int j) const { return grid_.at(i, j); }
  void set(int i, int j, double v) {
    if (!std::isfinite(v)) throw numeric_error("non-finite mean value");
    grid_.put(i, j, v);
  }

  template <class F>
  void for_each(F&& f) const {
    grid_.for_each(std::forward<F>(f));
  }

 private:
  detail::DyadGrid grid_;
};

}  // namespace netsplit
