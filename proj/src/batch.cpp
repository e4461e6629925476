#include "proxama/batch.hpp"

#include <cmath>

namespace proxama {

const char* method_name(RunMethod method) {
  switch (method) {
    case RunMethod::prox_ama:
      return "prox-ama";
    case RunMethod::ama:
      return "ama";
    case RunMethod::continuous_euler:
      return "continuous-euler";
    case RunMethod::continuous_rk4:
      break;
  }
  return "continuous-rk4";
}

RunOutcome run_one(const TwoBlockProblem& p, const RunSpec& spec) {
  RunOutcome out;
  if (spec.method == RunMethod::prox_ama || spec.method == RunMethod::ama) {
    const SolveResult r = spec.method == RunMethod::prox_ama
                              ? prox_ama_run(p, spec.schedules, spec.start, spec.solve)
                              : ama_run(p, spec.schedules.c, spec.start, spec.solve);
    out.status = status_name(r.status);
    out.final = r.final;
    out.residual = r.final_residual;
    out.steps = r.iterations_used;
    out.message = r.message;
    return out;
  }

  IntegrateOptions opts = spec.integrate;
  opts.method = spec.method == RunMethod::continuous_euler ? Integrator::euler : Integrator::rk4;
  try {
    const Trajectory traj = integrate(p, spec.schedules, spec.start, opts);
    out.status = "completed";
    out.final = traj.back().state;
    out.residual = traj.back().kkt;
    out.steps = std::llround(opts.horizon / opts.step);
  } catch (const IntegrationError& e) {
    out.status = "error";
    out.message = e.what();
    if (!e.partial().empty()) {
      out.final = e.partial().back().state;
      out.residual = e.partial().back().kkt;
    }
  }
  return out;
}

std::vector<RunOutcome> run_batch(const TwoBlockProblem& p, std::span<const RunSpec> specs,
                                  Execution exec) {
  std::vector<RunOutcome> out(specs.size());
  for_each_index(specs.size(), [&](std::size_t i) { out[i] = run_one(p, specs[i]); }, exec);
  return out;
}

}  // namespace proxama
