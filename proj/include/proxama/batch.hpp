#pragma once

#include <span>
#include <string>
#include <vector>

#include "proxama/discrete.hpp"
#include "proxama/dynamics.hpp"
#include "proxama/kernels.hpp"

namespace proxama {

enum class RunMethod { prox_ama, ama, continuous_euler, continuous_rk4 };

const char* method_name(RunMethod method);

/// One independent solve over a shared problem.
struct RunSpec {
  RunMethod method = RunMethod::prox_ama;
  Schedules schedules;
  PrimalDualState start;
  SolveConfig solve;
  /// step/horizon/record_every/reference for the continuous methods; `method` is ignored.
  IntegrateOptions integrate;
};

struct RunOutcome {
  /// converged | max_iters | completed | error
  std::string status;
  PrimalDualState final;
  KktResidual residual;
  /// Iterations (discrete) or steps taken (continuous).
  long long steps = 0;
  std::string message;
};

RunOutcome run_one(const TwoBlockProblem& p, const RunSpec& spec);

/// Runs every spec. Execution::parallel distributes runs over OpenMP threads;
/// each run is sequential, so outcomes are identical to Execution::serial.
std::vector<RunOutcome> run_batch(const TwoBlockProblem& p, std::span<const RunSpec> specs,
                                  Execution exec = Execution::parallel);

}  // namespace proxama
