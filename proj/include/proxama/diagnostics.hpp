#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "proxama/discrete.hpp"
#include "proxama/energy.hpp"
#include "proxama/kernels.hpp"
#include "proxama/schedules.hpp"
#include "proxama/trajectory.hpp"

namespace proxama {

/// Fills sample.energy for every sample of the trajectory.
void attach_energy(Trajectory& traj, const EnergyFunctional& fn, Execution exec = Execution::parallel);

struct MonotoneCheck {
  bool passed = true;
  double max_violation = 0.0;
};

/// Passes iff E[i+1] <= E[i] + 1e-6 (1 + E[i]) for every consecutive pair.
/// max_violation is the largest E[i+1] - E[i] - slack_i (0 if never positive).
MonotoneCheck check_energy_monotone(std::span<const double> energies);
/// Same, on the recorded energies (std::invalid_argument if a sample has none).
MonotoneCheck check_energy_monotone(const Trajectory& traj);

std::vector<double> energies_of(const Trajectory& traj);

struct EnergyStats {
  double initial = 0.0;
  double final = 0.0;
  double min = 0.0;
  double max = 0.0;
  bool monotone = true;
  double max_violation = 0.0;
  /// max - min of the energy over the last 10% of samples.
  double tail_oscillation = 0.0;
};

struct SummaryReport {
  /// converged | max_iters | completed | error
  std::string status;
  std::string method;
  bool discrete = false;
  double step = 0.0;
  double horizon = 0.0;
  int iterations = 0;
  std::size_t samples = 0;
  std::optional<PrimalDualState> final_state;
  KktResidual final_residual;
  std::optional<double> primal_objective;
  std::optional<double> dual_objective;
  /// First recorded t (or k) where max(r_x, r_z, r_feas) <= tolerance.
  std::optional<double> time_to_tolerance;
  double tolerance = 0.0;
  std::optional<EnergyStats> energy;
  std::optional<ValidationReport> validation;
  std::vector<std::string> warnings;
  std::string error;
};

/// Summary of a continuous run. status is "completed" (or "error" for an empty trajectory).
SummaryReport report(const Trajectory& traj, const TwoBlockProblem& p, double tolerance = 1e-6);
SummaryReport report(const SolveResult& result, const TwoBlockProblem& p, double tolerance = 1e-6);

}  // namespace proxama
