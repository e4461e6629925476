#include "proxama/paper_example.hpp"

#include <cmath>

namespace proxama::example {

TwoBlockProblem problem() {
  Matrix a(2, 2);
  a << 2.0, 1.0, -2.0, 1.0;
  a /= std::sqrt(8.0);
  Matrix b(2, 2);
  b << -3.0, 0.0, 4.0, 0.0;
  b /= 5.0;
  return TwoBlockProblem(SeparableFunction::quadratic_distance(Vector::Unit(2, 0), 1.0),
                         SeparableFunction::zero(2), SeparableFunction::l1(2, 1.0),
                         SeparableFunction::zero(2), LinearMap::dense(a), LinearMap::dense(b),
                         Vector::Zero(2));
}

PrimalDualState start() {
  const Vector v = (Vector(2) << -10.0, 10.0).finished();
  return PrimalDualState{v, v, v, 0.0};
}

ScalarSchedule c_schedule(CChoice c) {
  switch (c) {
    case CChoice::c025:
      return ScalarSchedule::constant(0.25);
    case CChoice::c199:
      return ScalarSchedule::constant(1.99);
    case CChoice::c1_decay:
      return ScalarSchedule::reciprocal_quadratic(1.1, 0.01);
    case CChoice::c2_decay:
      break;
  }
  return ScalarSchedule::reciprocal_sqrt(1.1, 0.01);
}

double tau_c_product(TauCChoice tc) { return tc == TauCChoice::tc025 ? 0.25 : 0.99; }

ScalarSchedule tau_schedule(CChoice c, TauCChoice tc) {
  return ScalarSchedule::coupled_reciprocal(tau_c_product(tc), c_schedule(c));
}

Schedules schedules(CChoice c, TauCChoice tc) {
  return prox_friendly_schedules(problem(), c_schedule(c), tau_schedule(c, tc));
}

std::optional<CChoice> parse_c(std::string_view name) {
  if (name == "c025") return CChoice::c025;
  if (name == "c199") return CChoice::c199;
  if (name == "c1-decay") return CChoice::c1_decay;
  if (name == "c2-decay") return CChoice::c2_decay;
  return std::nullopt;
}

std::optional<TauCChoice> parse_tau_c(std::string_view name) {
  if (name == "tc025") return TauCChoice::tc025;
  if (name == "tc099") return TauCChoice::tc099;
  return std::nullopt;
}

std::string name_of(CChoice c) {
  switch (c) {
    case CChoice::c025:
      return "c025";
    case CChoice::c199:
      return "c199";
    case CChoice::c1_decay:
      return "c1-decay";
    case CChoice::c2_decay:
      break;
  }
  return "c2-decay";
}

std::string name_of(TauCChoice tc) { return tc == TauCChoice::tc025 ? "tc025" : "tc099"; }

std::vector<Variant> all_variants() {
  std::vector<Variant> out;
  for (auto c : {CChoice::c025, CChoice::c199, CChoice::c1_decay, CChoice::c2_decay}) {
    for (auto tc : {TauCChoice::tc025, TauCChoice::tc099}) out.push_back({c, tc});
  }
  return out;
}

double default_horizon(CChoice c) {
  switch (c) {
    case CChoice::c025:
    case CChoice::c199:
      return 200.0;
    case CChoice::c1_decay:
      return 3000.0;
    case CChoice::c2_decay:
      break;
  }
  return 1000.0;
}

ProblemFile file(CChoice c, TauCChoice tc) {
  TwoBlockProblem p = problem();
  const Schedules s = prox_friendly_schedules(p, c_schedule(c), tau_schedule(c, tc));
  SolverSettings solver;
  solver.horizon = default_horizon(c);
  return ProblemFile{"example-" + name_of(c) + "-" + name_of(tc), std::move(p), c_schedule(c),
                     tau_schedule(c, tc), s.m1, s.m2, start(), solver};
}

}  // namespace proxama::example
