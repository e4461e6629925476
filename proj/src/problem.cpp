#include "proxama/problem.hpp"

#include <cmath>

#include "proxama/errors.hpp"

namespace proxama {

namespace {

void require_dim(const char* where, Eigen::Index expected, Eigen::Index actual) {
  if (expected != actual) {
    throw DimensionError(where, static_cast<std::size_t>(expected), static_cast<std::size_t>(actual));
  }
}

}  // namespace

TwoBlockProblem::TwoBlockProblem(SeparableFunction f, SeparableFunction h1, SeparableFunction g,
                                 SeparableFunction h2, LinearMap A, LinearMap B, Vector b)
    : f_(std::move(f)),
      h1_(std::move(h1)),
      g_(std::move(g)),
      h2_(std::move(h2)),
      A_(std::move(A)),
      B_(std::move(B)),
      b_(std::move(b)) {
  require_dim("TwoBlockProblem: dim(b) vs rows of A", A_.dim_out(), b_.size());
  require_dim("TwoBlockProblem: dim(b) vs rows of B", B_.dim_out(), b_.size());
  require_dim("TwoBlockProblem: dim(f) vs cols of A", A_.dim_in(), f_.dim());
  require_dim("TwoBlockProblem: dim(h1) vs cols of A", A_.dim_in(), h1_.dim());
  require_dim("TwoBlockProblem: dim(g) vs cols of B", B_.dim_in(), g_.dim());
  require_dim("TwoBlockProblem: dim(h2) vs cols of B", B_.dim_in(), h2_.dim());

  if (!(f_.strong_convexity() > 0.0)) {
    throw ProblemError("TwoBlockProblem: f must be strongly convex (sigma > 0), got " + f_.kind_name());
  }
  if (!h1_.is_smooth()) throw ProblemError("TwoBlockProblem: h1 must be smooth, got " + h1_.kind_name());
  if (!h2_.is_smooth()) throw ProblemError("TwoBlockProblem: h2 must be smooth, got " + h2_.kind_name());

  norm_A_ = operator_norm(A_);
  norm_B_ = operator_norm(B_);
  if (!(norm_A_ > 0.0)) throw ProblemError("TwoBlockProblem: A must be nonzero");
}

void check_state(const TwoBlockProblem& p, const PrimalDualState& s) {
  require_dim("state x", p.dim_x(), s.x.size());
  require_dim("state z", p.dim_z(), s.z.size());
  require_dim("state y", p.dim_y(), s.y.size());
}

ExtendedReal primal_objective(const TwoBlockProblem& p, const Vector& x, const Vector& z) {
  return p.f().eval(x) + p.h1().eval(x) + p.g().eval(z) + p.h2().eval(z);
}

ExtendedReal lagrangian(const TwoBlockProblem& p, const PrimalDualState& s) {
  check_state(p, s);
  const ExtendedReal objective = primal_objective(p, s.x, s.z);
  if (std::isinf(objective)) return objective;
  const Vector slack = p.b() - p.A().apply(s.x) - p.B().apply(s.z);
  return objective + s.y.dot(slack);
}

ExtendedReal dual_objective(const TwoBlockProblem& p, const Vector& y) {
  require_dim("dual_objective y", p.dim_y(), y.size());
  if (!p.h1().is_zero() || !p.h2().is_zero()) {
    throw CapabilityError(
        "dual_objective: only available when h1 and h2 are zero (infimal convolutions not evaluated)");
  }
  const ExtendedReal fc = p.f().conj_eval(p.A().adjoint_apply(y));
  const ExtendedReal gc = p.g().conj_eval(p.B().adjoint_apply(y));
  if (std::isinf(fc) || std::isinf(gc)) return -kPlusInfinity;
  return -fc - gc + y.dot(p.b());
}

double feasibility_residual(const TwoBlockProblem& p, const PrimalDualState& s) {
  check_state(p, s);
  return (p.A().apply(s.x) + p.B().apply(s.z) - p.b()).norm();
}

KktResidual kkt_residual(const TwoBlockProblem& p, const PrimalDualState& s) {
  check_state(p, s);
  KktResidual r;
  const Vector px = p.f().prox(1.0, s.x + p.A().adjoint_apply(s.y) - p.h1().grad(s.x));
  r.r_x = (s.x - px).norm();
  const Vector pz = p.g().prox(1.0, s.z + p.B().adjoint_apply(s.y) - p.h2().grad(s.z));
  r.r_z = (s.z - pz).norm();
  r.r_feas = (p.A().apply(s.x) + p.B().apply(s.z) - p.b()).norm();
  return r;
}

}  // namespace proxama
