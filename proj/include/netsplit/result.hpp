#pragma once

#include <optional>
#include <string>
#include <vector>

#include "netsplit/cells.hpp"
#include "netsplit/network.hpp"

namespace netsplit {

/// What the confidence interval targets: theta (cell means of E[A], thinning
/// models), xi (odds-transformed surrogate, fission), or the unadjusted
/// naive theta.
enum class TargetKind { theta, xi, naive };

inline std::string to_string(TargetKind t) {
  switch (t) {
    case TargetKind::theta: return "theta";
    case TargetKind::xi: return "xi";
    case TargetKind::naive: return "naive";
  }
  return "?";
}

/// Point estimate with a symmetric z-interval and the per-cell diagnostics
/// that produced it.
struct InferenceResult {
  double estimate = 0.0;
  double std_error = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double level = 0.0;  // 1 - alpha
  TargetKind target = TargetKind::theta;
  EdgeModel model = EdgeModel::gaussian;
  double split_param = 0.0;  // epsilon or gamma (0 for naive)
  std::vector<double> contrast;

  CellTable b_hat;
  std::optional<CellTable> b_hat0, b_hat1;  // Bernoulli test means per train value
  std::optional<CellTable> delta_hat;       // Bernoulli per-cell variance estimate
  std::vector<std::string> warnings;

  double width() const { return upper - lower; }
  bool contains(double x) const { return lower <= x && x <= upper; }
};

}  // namespace netsplit
