#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace netsplit {

/// Problems with input data or domain preconditions (bad files, labels,
/// empty cells, degenerate clusterings). CLI maps these to exit code 2.
struct data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Non-finite values or other numerical breakdowns. CLI exit code 3.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Directedness { directed, undirected };
enum class SelfLoops { allowed, disallowed };

/// Topology of a network: directed/undirected x self-loops/none.
/// Determines the active dyad set J:
///   directed + loops      -> all (i,j)
///   directed, no loops    -> i != j
///   undirected + loops    -> i <= j
///   undirected, no loops  -> i <  j
struct NetworkKind {
  Directedness directedness = Directedness::directed;
  SelfLoops self_loops = SelfLoops::allowed;

  bool undirected() const { return directedness == Directedness::undirected; }
  bool loops() const { return self_loops == SelfLoops::allowed; }

  /// True if (i,j) addresses a dyad of J (possibly via its mirror (j,i)).
  bool addresses(int i, int j) const { return i != j || loops(); }

  /// Canonical storage orientation: undirected dyads are kept as i <= j.
  std::pair<int, int> canonical(int i, int j) const {
    if (undirected() && i > j) return {j, i};
    return {i, j};
  }

  friend bool operator==(const NetworkKind&, const NetworkKind&) = default;
};

inline constexpr NetworkKind kDirectedLoops{Directedness::directed, SelfLoops::allowed};
inline constexpr NetworkKind kDirectedNoLoops{Directedness::directed, SelfLoops::disallowed};
inline constexpr NetworkKind kUndirectedLoops{Directedness::undirected, SelfLoops::allowed};
inline constexpr NetworkKind kUndirectedNoLoops{Directedness::undirected, SelfLoops::disallowed};

inline std::string to_string(NetworkKind kind) {
  std::string s = kind.undirected() ? "undirected" : "directed";
  s += kind.loops() ? "-self" : "-noself";
  return s;
}

inline NetworkKind parse_kind(const std::string& token) {
  if (token == "directed-self") return kDirectedLoops;
  if (token == "directed-noself") return kDirectedNoLoops;
  if (token == "undirected-self") return kUndirectedLoops;
  if (token == "undirected-noself") return kUndirectedNoLoops;
  throw std::invalid_argument(
      "unknown network kind '" + token +
      "' (expected directed-self|directed-noself|undirected-self|undirected-noself)");
}

/// Ordered or unordered node pair, 0-based. For undirected kinds only the
/// canonical orientation (first <= second) appears in J.
using Dyad = std::pair<int, int>;

inline std::int64_t dyad_count(int n, NetworkKind kind) {
  const std::int64_t m = n;
  if (kind.undirected()) return kind.loops() ? m * (m + 1) / 2 : m * (m - 1) / 2;
  return kind.loops() ? m * m : m * (m - 1);
}

/// Visits every dyad of J in row-major order as f(ordinal, i, j).
template <class F>
inline void for_each_dyad(int n, NetworkKind kind, F&& f) {
  std::int64_t ordinal = 0;
  for (int i = 0; i < n; ++i) {
    const int j0 = kind.undirected() ? (kind.loops() ? i : i + 1) : 0;
    for (int j = j0; j < n; ++j) {
      if (i == j && !kind.loops()) continue;
      f(ordinal++, i, j);
    }
  }
}

/// Materialized J in row-major order.
inline std::vector<Dyad> active_dyads(int n, NetworkKind kind) {
  if (n < 1) throw std::invalid_argument("active_dyads: n must be >= 1");
  std::vector<Dyad> out;
  out.reserve(static_cast<std::size_t>(dyad_count(n, kind)));
  for_each_dyad(n, kind, [&](std::int64_t, int i, int j) { out.emplace_back(i, j); });
  return out;
}

}  // namespace netsplit
