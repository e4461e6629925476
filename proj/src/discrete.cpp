#include "proxama/discrete.hpp"

#include "proxama/errors.hpp"

namespace proxama {

namespace {

TrajectorySample sample_of(const PrimalDualState& s, const KktResidual& r) {
  TrajectorySample out;
  out.t = s.t;
  out.state = s;
  out.kkt = r;
  out.feasibility = r.r_feas;
  return out;
}

bool meets(const KktResidual& r, const SolveConfig& cfg) {
  return std::max(r.r_x, r.r_z) <= cfg.tol_kkt && r.r_feas <= cfg.tol_feas;
}

SolveResult run(const TwoBlockProblem& p, const Schedules& sched, const PrimalDualState& s0,
                const SolveConfig& cfg, const char* method) {
  if (cfg.max_iters < 0) throw std::invalid_argument("solve: max_iters must be >= 0");
  if (!(cfg.tol_kkt > 0.0) || !(cfg.tol_feas > 0.0)) {
    throw std::invalid_argument("solve: tolerances must be positive");
  }
  if (cfg.record_every < 1) throw std::invalid_argument("solve: record_every must be >= 1");
  check_state(p, s0);

  SolveResult result;
  result.iterates.method = method;
  result.iterates.step = 1.0;
  result.iterates.discrete = true;

  PrimalDualState s = s0;
  s.t = 0.0;
  KktResidual r = kkt_residual(p, s);
  result.iterates.samples.push_back(sample_of(s, r));

  int k = 0;
  try {
    while (!meets(r, cfg) && k < cfg.max_iters) {
      s = prox_ama_step(p, sched, k, s, cfg.z);
      ++k;
      r = kkt_residual(p, s);
      if (k % cfg.record_every == 0) result.iterates.samples.push_back(sample_of(s, r));
    }
    result.status = meets(r, cfg) ? SolveStatus::converged : SolveStatus::max_iters;
  } catch (const std::exception& e) {
    result.status = SolveStatus::error;
    result.message = e.what();
  }

  if (result.iterates.samples.back().t != s.t) result.iterates.samples.push_back(sample_of(s, r));
  result.iterates.horizon = s.t;
  result.final = s;
  result.final_residual = r;
  result.iterations_used = k;
  return result;
}

}  // namespace

const char* status_name(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged:
      return "converged";
    case SolveStatus::max_iters:
      return "max_iters";
    case SolveStatus::error:
      break;
  }
  return "error";
}

PrimalDualState prox_ama_step(const TwoBlockProblem& p, const LinearMap& m1_k,
                              const MetricSnapshot& m2_k, double c_k, const PrimalDualState& s_k,
                              const ZSolveOptions& opts) {
  PrimalDualState next;
  next.x = solve_x_subproblem(p, m1_k, s_k.x, s_k.y);
  next.z = solve_z_subproblem(p, m2_k, c_k, s_k.z, s_k.y, next.x, opts);
  const Vector w = c_k * (p.b() - p.A().apply(next.x) - p.B().apply(next.z));
  next.y = s_k.y + w;
  next.t = s_k.t + 1.0;
  return next;
}

PrimalDualState prox_ama_step(const TwoBlockProblem& p, const Schedules& sched, int k,
                              const PrimalDualState& s_k, const ZSolveOptions& opts) {
  const double t = static_cast<double>(k);
  const double c = sched.c.value_at(t);
  PrimalDualState next = prox_ama_step(p, sched.m1.at(t), sched.m2.snapshot(t, c), c, s_k, opts);
  next.t = t + 1.0;
  return next;
}

SolveResult prox_ama_run(const TwoBlockProblem& p, const Schedules& sched, const PrimalDualState& s0,
                         const SolveConfig& cfg) {
  return run(p, sched, s0, cfg, "prox-ama");
}

SolveResult ama_run(const TwoBlockProblem& p, const ScalarSchedule& c, const PrimalDualState& s0,
                    const SolveConfig& cfg) {
  if (!p.h1().is_zero() || !p.h2().is_zero()) {
    throw CapabilityError("ama: requires h1 = h2 = 0 (got " + p.h1().kind_name() + ", " +
                          p.h2().kind_name() + ")");
  }
  const Schedules sched{c, MetricSchedule::zero(p.dim_x()), MetricSchedule::zero(p.dim_z())};
  SolveConfig relaxed = cfg;
  relaxed.z.require_cstrong = false;
  return run(p, sched, s0, relaxed, "ama");
}

PrimalDualState compute_reference(const TwoBlockProblem& p, const Schedules& sched, int max_iters,
                                  const ZSolveOptions& z) {
  SolveConfig cfg;
  cfg.z = z;
  cfg.max_iters = max_iters;
  cfg.tol_kkt = 1e-10;
  cfg.tol_feas = 1e-10;
  cfg.record_every = max_iters + 1;
  const PrimalDualState origin{Vector::Zero(p.dim_x()), Vector::Zero(p.dim_z()),
                               Vector::Zero(p.dim_y()), 0.0};
  SolveResult r = prox_ama_run(p, sched, origin, cfg);
  if (r.status != SolveStatus::converged) {
    throw ConvergenceError("compute_reference: " + std::string(status_name(r.status)) +
                               (r.message.empty() ? "" : " (" + r.message + ")"),
                           r.final_residual.max(), r.iterations_used);
  }
  r.final.t = 0.0;
  return r.final;
}

}  // namespace proxama
