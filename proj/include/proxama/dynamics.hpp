#pragma once

#include <optional>
#include <stdexcept>

#include "proxama/problem.hpp"
#include "proxama/schedules.hpp"
#include "proxama/trajectory.hpp"

namespace proxama {

/// Inner solver settings for z-updates that are not a single prox.
struct ZSolveOptions {
  double tol = 1e-10;
  int max_iter = 50000;
  /// Reject subproblems whose Hessian c B^*B + M2 is singular. Plain AMA
  /// (M2 = 0) turns this off: its subproblem may still have a minimizer.
  bool require_cstrong = true;
};

/// K_t(u) = argmin_p f(p) - 1/2|p|^2 + 1/2|p|^2_{M1} + 1/2|p - u|^2, i.e. the
/// p with u in (df + M1)(p). M1 must be mu*Id with mu >= 0.
Vector x_argmin(const TwoBlockProblem& p, const LinearMap& m1, const Vector& u);

/// argmin_p f(p) - <y, Ap> + <p - x, grad h1(x)> + 1/2|p - x|^2_{M1}.
Vector solve_x_subproblem(const TwoBlockProblem& p, const LinearMap& m1, const Vector& x,
                          const Vector& y);

/// J_t(v) = argmin_q g(q) + 1/2 <q, (c B^*B + M2) q> - c <v, q>, by proximal
/// gradient from `start`. Lipschitz in v with constant c / lambda_min(c B^*B + M2).
Vector z_argmin(const TwoBlockProblem& p, const LinearMap& m2, double c, const Vector& v,
                const Vector& start, const ZSolveOptions& opts = {});

/// argmin_q g(q) - <y, Bq> + c/2 |A x_new + Bq - b|^2 + <q - z, grad h2(z)> + 1/2|q - z|^2_{M2}.
/// A single prox of tau*g when the snapshot carries tau, the inner solver otherwise.
Vector solve_z_subproblem(const TwoBlockProblem& p, const MetricSnapshot& m2, double c,
                          const Vector& z, const Vector& y, const Vector& x_new,
                          const ZSolveOptions& opts = {});

/// (u, v, w) = (dx/dt, dz/dt, dy/dt).
struct GammaOutput {
  Vector u;
  Vector v;
  Vector w;
};

/// The subproblem minimizers behind one Gamma evaluation; u = x_bar - x, v = z_bar - z.
struct GammaEvaluation {
  Vector x_bar;
  Vector z_bar;
  GammaOutput field;
};

/// Evaluates x-then-z-then-y: the z-update consumes x_bar from the same call.
GammaEvaluation evaluate_gamma(const TwoBlockProblem& p, const Schedules& sched, double t,
                               const PrimalDualState& s, const ZSolveOptions& opts = {});
GammaOutput gamma(const TwoBlockProblem& p, const Schedules& sched, double t,
                  const PrimalDualState& s, const ZSolveOptions& opts = {});

enum class Integrator { euler, rk4 };

struct IntegrateOptions {
  Integrator method = Integrator::euler;
  double step = 0.01;
  double horizon = 1.0;
  int record_every = 1;
  /// Saddle point for energy recording; none means no energy column.
  std::optional<PrimalDualState> reference;
  ZSolveOptions z;
};

/// Thrown by integrate() when a subproblem fails; carries the samples so far.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, Trajectory partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

/// Fixed-step integration of dU/dt = Gamma(t, U) on [0, horizon] with
/// round(horizon/step) steps. Euler with step 1 reproduces Proximal AMA.
Trajectory integrate(const TwoBlockProblem& p, const Schedules& sched, const PrimalDualState& s0,
                     const IntegrateOptions& opts);

const char* integrator_name(Integrator method);

}  // namespace proxama
