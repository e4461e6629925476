#include "proxama/dynamics.hpp"

#include <cmath>
#include <string>

#include "proxama/diagnostics.hpp"
#include "proxama/errors.hpp"

namespace proxama {

namespace {

constexpr double kSingularHessian = 1e-12;

PrimalDualState axpy(const PrimalDualState& s, double h, const GammaOutput& d, double t) {
  return PrimalDualState{s.x + h * d.u, s.z + h * d.v, s.y + h * d.w, t};
}

TrajectorySample make_sample(const TwoBlockProblem& p, const PrimalDualState& s) {
  TrajectorySample sample;
  sample.t = s.t;
  sample.state = s;
  sample.kkt = kkt_residual(p, s);
  sample.feasibility = sample.kkt.r_feas;
  return sample;
}

}  // namespace

const char* integrator_name(Integrator method) {
  return method == Integrator::euler ? "euler" : "rk4";
}

Vector x_argmin(const TwoBlockProblem& p, const LinearMap& m1, const Vector& u) {
  const auto mu = m1.as_scaled_identity();
  if (!mu) {
    throw CapabilityError("x-subproblem: M1 must be zero or a scaled identity");
  }
  if (*mu < 0.0) throw ProblemError("x-subproblem: M1 = mu*Id needs mu >= 0");
  if (*mu == 0.0) return p.f().conj_grad(u);
  return p.f().prox(1.0 / *mu, u / *mu);
}

Vector solve_x_subproblem(const TwoBlockProblem& p, const LinearMap& m1, const Vector& x,
                          const Vector& y) {
  return x_argmin(p, m1, m1.apply(x) + p.A().adjoint_apply(y) - p.h1().grad(x));
}

Vector z_argmin(const TwoBlockProblem& p, const LinearMap& m2, double c, const Vector& v,
                const Vector& start, const ZSolveOptions& opts) {
  const Matrix hessian = c * gram(p.B()).to_dense() + m2.to_dense();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (hessian + hessian.transpose()),
                                            Eigen::EigenvaluesOnly);
  const double beta = eig.eigenvalues().minCoeff();
  const double lipschitz = eig.eigenvalues().maxCoeff();
  if (opts.require_cstrong && !(beta > kSingularHessian)) {
    throw ProblemError("z-subproblem: c B^*B + M2 is not positive definite (lambda_min = " +
                       std::to_string(beta) + ")");
  }
  if (!(lipschitz > 0.0)) throw ProblemError("z-subproblem: c B^*B + M2 vanishes");

  const double step = 1.0 / lipschitz;
  const Vector cv = c * v;
  Vector q = start;
  double moved = 0.0;
  for (int it = 0; it < opts.max_iter; ++it) {
    Vector next = p.g().prox(step, q - step * (hessian * q - cv));
    moved = (next - q).norm();
    q = std::move(next);
    if (moved < opts.tol) return q;
  }
  throw ConvergenceError("z-subproblem: proximal gradient stalled after " +
                             std::to_string(opts.max_iter) + " iterations, last step " +
                             std::to_string(moved),
                         moved, opts.max_iter);
}

Vector solve_z_subproblem(const TwoBlockProblem& p, const MetricSnapshot& m2, double c,
                          const Vector& z, const Vector& y, const Vector& x_new,
                          const ZSolveOptions& opts) {
  const LinearMap& B = p.B();
  if (m2.tau) {
    const double tau = *m2.tau;
    const Vector residual = B.apply(z) + p.A().apply(x_new) - p.b();
    const Vector arg = z + tau * (B.adjoint_apply(y) - c * B.adjoint_apply(residual) - p.h2().grad(z));
    return p.g().prox(tau, arg);
  }
  const Vector center = (m2.M.apply(z) + B.adjoint_apply(y) - p.h2().grad(z)) / c -
                        B.adjoint_apply(p.A().apply(x_new) - p.b());
  return z_argmin(p, m2.M, c, center, z, opts);
}

GammaEvaluation evaluate_gamma(const TwoBlockProblem& p, const Schedules& sched, double t,
                               const PrimalDualState& s, const ZSolveOptions& opts) {
  const double c = sched.c.value_at(t);
  GammaEvaluation out;
  out.x_bar = solve_x_subproblem(p, sched.m1.at(t), s.x, s.y);
  out.z_bar = solve_z_subproblem(p, sched.m2.snapshot(t, c), c, s.z, s.y, out.x_bar, opts);
  out.field.u = out.x_bar - s.x;
  out.field.v = out.z_bar - s.z;
  out.field.w = c * (p.b() - p.A().apply(out.x_bar) - p.B().apply(out.z_bar));
  return out;
}

GammaOutput gamma(const TwoBlockProblem& p, const Schedules& sched, double t,
                  const PrimalDualState& s, const ZSolveOptions& opts) {
  return evaluate_gamma(p, sched, t, s, opts).field;
}

Trajectory integrate(const TwoBlockProblem& p, const Schedules& sched, const PrimalDualState& s0,
                     const IntegrateOptions& opts) {
  const double h = opts.step;
  if (!(h > 0.0) || h > 1.0) throw std::invalid_argument("integrate: step must lie in (0, 1]");
  if (!(opts.horizon >= h)) throw std::invalid_argument("integrate: horizon must be >= step");
  if (opts.record_every < 1) throw std::invalid_argument("integrate: record_every must be >= 1");
  check_state(p, s0);

  std::optional<EnergyFunctional> energy_fn;
  if (opts.reference) energy_fn.emplace(p, sched, *opts.reference);

  Trajectory traj;
  traj.method = integrator_name(opts.method);
  traj.step = h;
  traj.horizon = opts.horizon;
  traj.discrete = false;

  const long long steps = std::llround(opts.horizon / h);
  PrimalDualState s = s0;
  s.t = 0.0;
  traj.samples.push_back(make_sample(p, s));

  try {
    for (long long n = 0; n < steps; ++n) {
      const double t = static_cast<double>(n) * h;
      const double t_next = static_cast<double>(n + 1) * h;
      if (opts.method == Integrator::euler) {
        const GammaEvaluation ev = evaluate_gamma(p, sched, t, s, opts.z);
        if (h == 1.0) {
          // x + 1*(x_bar - x) would reintroduce rounding; the unit step is the argmin itself.
          s = PrimalDualState{ev.x_bar, ev.z_bar, s.y + h * ev.field.w, t_next};
        } else {
          s = axpy(s, h, ev.field, t_next);
        }
      } else {
        const double half = 0.5 * h;
        const GammaOutput k1 = gamma(p, sched, t, s, opts.z);
        const GammaOutput k2 = gamma(p, sched, t + half, axpy(s, half, k1, t + half), opts.z);
        const GammaOutput k3 = gamma(p, sched, t + half, axpy(s, half, k2, t + half), opts.z);
        const GammaOutput k4 = gamma(p, sched, t_next, axpy(s, h, k3, t_next), opts.z);
        const double sixth = h / 6.0;
        s.x += sixth * (k1.u + 2.0 * k2.u + 2.0 * k3.u + k4.u);
        s.z += sixth * (k1.v + 2.0 * k2.v + 2.0 * k3.v + k4.v);
        s.y += sixth * (k1.w + 2.0 * k2.w + 2.0 * k3.w + k4.w);
        s.t = t_next;
      }
      if ((n + 1) % opts.record_every == 0 || n + 1 == steps) traj.samples.push_back(make_sample(p, s));
    }
  } catch (const std::exception& e) {
    if (energy_fn) attach_energy(traj, *energy_fn);
    throw IntegrationError(std::string("integrate: ") + e.what(), std::move(traj));
  }

  if (energy_fn) attach_energy(traj, *energy_fn);
  return traj;
}

}  // namespace proxama
