#pragma once

#include <algorithm>

#include "proxama/functions.hpp"
#include "proxama/linop.hpp"

namespace proxama {

/// minimize f(x) + h1(x) + g(z) + h2(z)  subject to  Ax + Bz = b,
/// with f strongly convex and h1, h2 smooth.
class TwoBlockProblem {
 public:
  /// Validates dimensions, sigma(f) > 0, smoothness of h1/h2 and A != 0.
  TwoBlockProblem(SeparableFunction f, SeparableFunction h1, SeparableFunction g,
                  SeparableFunction h2, LinearMap A, LinearMap B, Vector b);

  const SeparableFunction& f() const { return f_; }
  const SeparableFunction& h1() const { return h1_; }
  const SeparableFunction& g() const { return g_; }
  const SeparableFunction& h2() const { return h2_; }
  const LinearMap& A() const { return A_; }
  const LinearMap& B() const { return B_; }
  const Vector& b() const { return b_; }

  Eigen::Index dim_x() const { return A_.dim_in(); }
  Eigen::Index dim_z() const { return B_.dim_in(); }
  Eigen::Index dim_y() const { return b_.size(); }

  double sigma() const { return f_.strong_convexity(); }
  double lipschitz_h1() const { return *h1_.grad_lipschitz(); }
  double lipschitz_h2() const { return *h2_.grad_lipschitz(); }
  double norm_A() const { return norm_A_; }
  double norm_B() const { return norm_B_; }

 private:
  SeparableFunction f_, h1_, g_, h2_;
  LinearMap A_, B_;
  Vector b_;
  double norm_A_ = 0.0;
  double norm_B_ = 0.0;
};

/// A primal-dual triple at time t (continuous runs) or iteration t (discrete runs).
struct PrimalDualState {
  Vector x;
  Vector z;
  Vector y;
  double t = 0.0;
};

struct KktResidual {
  double r_x = 0.0;
  double r_z = 0.0;
  double r_feas = 0.0;

  double max() const { return std::max({r_x, r_z, r_feas}); }
};

/// Throws DimensionError unless x, z, y fit the problem.
void check_state(const TwoBlockProblem& p, const PrimalDualState& s);

/// f + h1 + g + h2 + <y, b - Ax - Bz>.
ExtendedReal lagrangian(const TwoBlockProblem& p, const PrimalDualState& s);
ExtendedReal primal_objective(const TwoBlockProblem& p, const Vector& x, const Vector& z);

/// -f*(A^*y) - g*(B^*y) + <y, b>; -infinity outside the dual domain.
/// Only available when h1 and h2 are zero (CapabilityError otherwise).
ExtendedReal dual_objective(const TwoBlockProblem& p, const Vector& y);

/// |Ax + Bz - b|
double feasibility_residual(const TwoBlockProblem& p, const PrimalDualState& s);

/// Prox fixed-point residuals of the optimality system:
///   r_x = |x - prox_f(x + A^*y - grad h1(x))|, r_z likewise for z, r_feas = |Ax + Bz - b|.
KktResidual kkt_residual(const TwoBlockProblem& p, const PrimalDualState& s);

}  // namespace proxama
