#pragma once

#include <string>

#include "proxama/dynamics.hpp"
#include "proxama/problem.hpp"
#include "proxama/schedules.hpp"
#include "proxama/trajectory.hpp"

namespace proxama {

/// Iteration k evaluates the schedules at t = k.
struct SolveConfig {
  int max_iters = 20000;
  double tol_kkt = 1e-6;
  double tol_feas = 1e-6;
  int record_every = 1;
  ZSolveOptions z;
};

enum class SolveStatus { converged, max_iters, error };

const char* status_name(SolveStatus status);

struct SolveResult {
  PrimalDualState final;
  Trajectory iterates;
  SolveStatus status = SolveStatus::error;
  int iterations_used = 0;
  KktResidual final_residual;
  std::string message;
};

/// One Proximal AMA step: x-update, z-update with the new x, multiplier ascent.
PrimalDualState prox_ama_step(const TwoBlockProblem& p, const LinearMap& m1_k,
                              const MetricSnapshot& m2_k, double c_k, const PrimalDualState& s_k,
                              const ZSolveOptions& opts = {});
PrimalDualState prox_ama_step(const TwoBlockProblem& p, const Schedules& sched, int k,
                              const PrimalDualState& s_k, const ZSolveOptions& opts = {});

/// Iterates until max(r_x, r_z) <= tol_kkt and r_feas <= tol_feas, or max_iters.
/// Subproblem failures give status error with the iterates recorded so far.
SolveResult prox_ama_run(const TwoBlockProblem& p, const Schedules& sched, const PrimalDualState& s0,
                         const SolveConfig& cfg);

/// Tseng's AMA: M1 = M2 = 0, requires h1 = h2 = 0 (CapabilityError otherwise).
SolveResult ama_run(const TwoBlockProblem& p, const ScalarSchedule& c, const PrimalDualState& s0,
                    const SolveConfig& cfg);

/// High-accuracy saddle point (tolerance 1e-10) from the origin, used as the
/// energy reference. Throws ConvergenceError if the solve does not converge.
PrimalDualState compute_reference(const TwoBlockProblem& p, const Schedules& sched,
                                  int max_iters = 500000, const ZSolveOptions& z = {});

}  // namespace proxama
