#pragma once

#include "proxama/problem.hpp"
#include "proxama/schedules.hpp"

namespace proxama {

/// One evaluation of the Lyapunov energy
///   E = (2 sigma c - c^2 |A|^2) |x - x*|^2 + c |x - x*|^2_{M1}
///       + |z - z*|^2_{c M2 + c^2 B^*B} + |y - y*|^2.
struct EnergySample {
  double t = 0.0;
  double energy = 0.0;
  double x_term = 0.0;
  double x_metric_term = 0.0;
  double z_metric_term = 0.0;
  double y_term = 0.0;
};

/// Energy relative to a fixed saddle point. The reference is checked once on
/// construction (KKT residual <= 1e-6), then the functional is pure.
class EnergyFunctional {
 public:
  static constexpr double kReferenceTolerance = 1e-6;

  EnergyFunctional(const TwoBlockProblem& p, Schedules schedules, PrimalDualState reference);

  EnergySample operator()(double t, const PrimalDualState& s) const;
  const PrimalDualState& reference() const { return ref_; }

 private:
  TwoBlockProblem problem_;
  Schedules schedules_;
  PrimalDualState ref_;
};

EnergySample energy(const TwoBlockProblem& p, const Schedules& schedules, double t,
                    const PrimalDualState& s, const PrimalDualState& ref);

}  // namespace proxama
