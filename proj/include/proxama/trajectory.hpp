#pragma once

#include <optional>
#include <string>
#include <vector>

#include "proxama/energy.hpp"
#include "proxama/problem.hpp"

namespace proxama {

struct TrajectorySample {
  double t = 0.0;
  PrimalDualState state;
  double feasibility = 0.0;
  KktResidual kkt;
  std::optional<EnergySample> energy;
};

/// Recorded states of a continuous run (t = time) or a discrete run
/// (t = iteration index). Timestamps are strictly increasing and the first
/// sample is the initial condition.
struct Trajectory {
  std::vector<TrajectorySample> samples;
  /// "euler", "rk4", "prox-ama" or "ama".
  std::string method;
  double step = 0.0;
  double horizon = 0.0;
  bool discrete = false;

  bool empty() const { return samples.empty(); }
  const TrajectorySample& back() const { return samples.back(); }
};

}  // namespace proxama
