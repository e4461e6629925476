#include "proxama/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "proxama/errors.hpp"

namespace proxama {

// ---------------------------------------------------------------------------
// Energy

EnergyFunctional::EnergyFunctional(const TwoBlockProblem& p, Schedules schedules,
                                   PrimalDualState reference)
    : problem_(p), schedules_(std::move(schedules)), ref_(std::move(reference)) {
  check_state(problem_, ref_);
  const double residual = kkt_residual(problem_, ref_).max();
  if (!(residual <= kReferenceTolerance)) {
    throw std::invalid_argument("energy: reference is not a saddle point (KKT residual " +
                                std::to_string(residual) + ")");
  }
}

EnergySample EnergyFunctional::operator()(double t, const PrimalDualState& s) const {
  check_state(problem_, s);
  const double c = schedules_.c.value_at(t);
  const double sigma = problem_.sigma();
  const double norm_a = problem_.norm_A();
  const Vector dx = s.x - ref_.x;
  const Vector dz = s.z - ref_.z;
  const Vector dy = s.y - ref_.y;

  EnergySample e;
  e.t = t;
  e.x_term = (2.0 * sigma * c - c * c * norm_a * norm_a) * dx.squaredNorm();
  e.x_metric_term = c * squared_seminorm(schedules_.m1.at(t), dx);
  e.z_metric_term = c * squared_seminorm(schedules_.m2.at(t), dz) +
                    c * c * problem_.B().apply(dz).squaredNorm();
  e.y_term = dy.squaredNorm();
  e.energy = e.x_term + e.x_metric_term + e.z_metric_term + e.y_term;
  return e;
}

EnergySample energy(const TwoBlockProblem& p, const Schedules& schedules, double t,
                    const PrimalDualState& s, const PrimalDualState& ref) {
  return EnergyFunctional(p, schedules, ref)(t, s);
}

void attach_energy(Trajectory& traj, const EnergyFunctional& fn, Execution exec) {
  auto& samples = traj.samples;
  for_each_index(
      samples.size(), [&](std::size_t i) { samples[i].energy = fn(samples[i].t, samples[i].state); },
      exec);
}

// ---------------------------------------------------------------------------
// Monotonicity

MonotoneCheck check_energy_monotone(std::span<const double> energies) {
  MonotoneCheck out;
  for (std::size_t i = 1; i < energies.size(); ++i) {
    const double slack = 1e-6 * (1.0 + energies[i - 1]);
    const double excess = energies[i] - energies[i - 1] - slack;
    if (excess > 0.0) {
      out.passed = false;
      out.max_violation = std::max(out.max_violation, excess);
    }
  }
  return out;
}

std::vector<double> energies_of(const Trajectory& traj) {
  std::vector<double> out;
  out.reserve(traj.samples.size());
  for (const auto& s : traj.samples) {
    if (!s.energy) throw std::invalid_argument("trajectory sample without energy (no reference)");
    out.push_back(s.energy->energy);
  }
  return out;
}

MonotoneCheck check_energy_monotone(const Trajectory& traj) {
  const auto e = energies_of(traj);
  return check_energy_monotone(e);
}

// ---------------------------------------------------------------------------
// Reports

namespace {

void fill_common(SummaryReport& r, const Trajectory& traj, const TwoBlockProblem& p, double tolerance) {
  r.method = traj.method;
  r.discrete = traj.discrete;
  r.step = traj.step;
  r.horizon = traj.horizon;
  r.samples = traj.samples.size();
  r.tolerance = tolerance;
  if (traj.empty()) return;

  const auto& last = traj.back();
  r.final_state = last.state;
  r.final_residual = last.kkt;
  r.primal_objective = primal_objective(p, last.state.x, last.state.z);
  if (p.h1().is_zero() && p.h2().is_zero()) r.dual_objective = dual_objective(p, last.state.y);

  for (const auto& s : traj.samples) {
    if (s.kkt.max() <= tolerance) {
      r.time_to_tolerance = s.t;
      break;
    }
  }

  const bool has_energy = std::all_of(traj.samples.begin(), traj.samples.end(),
                                      [](const auto& s) { return s.energy.has_value(); });
  if (has_energy) {
    const auto e = energies_of(traj);
    EnergyStats stats;
    stats.initial = e.front();
    stats.final = e.back();
    stats.min = *std::min_element(e.begin(), e.end());
    stats.max = *std::max_element(e.begin(), e.end());
    const auto mono = check_energy_monotone(e);
    stats.monotone = mono.passed;
    stats.max_violation = mono.max_violation;
    const std::size_t tail = std::max<std::size_t>(1, e.size() / 10);
    const auto first = e.end() - static_cast<std::ptrdiff_t>(tail);
    stats.tail_oscillation = *std::max_element(first, e.end()) - *std::min_element(first, e.end());
    r.energy = stats;
  }
}

}  // namespace

SummaryReport report(const Trajectory& traj, const TwoBlockProblem& p, double tolerance) {
  SummaryReport r;
  fill_common(r, traj, p, tolerance);
  if (traj.empty()) {
    r.status = "error";
    r.error = "empty trajectory";
    return r;
  }
  r.status = "completed";
  r.iterations = static_cast<int>(std::llround(traj.horizon / traj.step));
  return r;
}

SummaryReport report(const SolveResult& result, const TwoBlockProblem& p, double tolerance) {
  SummaryReport r;
  fill_common(r, result.iterates, p, tolerance);
  if (result.iterates.empty()) {
    r.status = "error";
    r.error = "empty trajectory";
    return r;
  }
  r.status = status_name(result.status);
  r.iterations = result.iterations_used;
  r.final_state = result.final;
  r.final_residual = result.final_residual;
  r.error = result.message;
  return r;
}

}  // namespace proxama
