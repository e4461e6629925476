// Runs the acceptance criteria end to end and prints one PASS/FAIL line each.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "proxama/diagnostics.hpp"
#include "proxama/discrete.hpp"
#include "proxama/dynamics.hpp"
#include "proxama/functions.hpp"
#include "proxama/kernels.hpp"
#include "proxama/paper_example.hpp"
#include "proxama/schedules.hpp"
#include "support.hpp"

using namespace proxama;
using namespace proxama::testing;

namespace {

const double kY = 0.7071;

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double limit_distance(const PrimalDualState& s) {
  // Distance to x* = z* = 0, |y_i| = 0.7071 (the sign is certified separately by the KKT residual).
  double d = std::max(s.x.cwiseAbs().maxCoeff(), s.z.cwiseAbs().maxCoeff());
  for (int i = 0; i < 2; ++i) d = std::max(d, std::abs(std::abs(s.y(i)) - 1.0 / std::sqrt(2.0)));
  return d;
}

SeparableFunction random_instance(int kind, Eigen::Index n) {
  switch (kind) {
    case 0:
      return SeparableFunction::quadratic_distance(random_vector(n, 3.0), uniform(0.2, 3.0));
    case 1:
      return SeparableFunction::l1(n, uniform(0.0, 2.0));
    case 2: {
      const Vector lo = random_vector(n, 3.0) - Vector::Constant(n, 1.0);
      return SeparableFunction::box_indicator(lo, lo + Vector::Constant(n, uniform(0.1, 4.0)));
    }
    case 3:
      return SeparableFunction::zero(n);
    default:
      return SeparableFunction::quadratic_form(LinearMap::dense(random_spd(n, 0.5)), random_vector(n, 2.0));
  }
}

Outcome example_discrete() {
  Outcome o;
  const auto p = example::problem();
  const auto s = example::schedules(example::CChoice::c025, example::TauCChoice::tc099);
  SolveConfig cfg;
  cfg.max_iters = 20000;
  cfg.tol_kkt = cfg.tol_feas = 1e-6;
  const auto r = prox_ama_run(p, s, example::start(), cfg);
  const auto& f = r.final;
  o.detail << "iters=" << r.iterations_used << " kkt=(" << r.final_residual.r_x << "," << r.final_residual.r_z
           << ") feas=" << r.final_residual.r_feas << " |x|=" << f.x.norm() << " |z|=" << f.z.norm() << " y=("
           << f.y(0) << "," << f.y(1) << ")";
  o.require(r.status == SolveStatus::converged, "converged");
  o.require(std::max(r.final_residual.r_x, r.final_residual.r_z) <= 1e-6, "kkt <= 1e-6");
  o.require(r.final_residual.r_feas <= 1e-6, "feas <= 1e-6");
  o.require(f.x.norm() <= 1e-4, "|x| <= 1e-4");
  o.require(f.z.norm() <= 1e-4, "|z| <= 1e-4");
  for (int i = 0; i < 2; ++i) o.require(std::abs(std::abs(f.y(i)) - kY) <= 1e-3, "| |y_i| - 0.7071 | <= 1e-3");
  return o;
}

Outcome example_continuous() {
  Outcome o;
  const auto p = example::problem();
  const auto s = example::schedules(example::CChoice::c025, example::TauCChoice::tc099);
  IntegrateOptions rk;
  rk.method = Integrator::rk4;
  rk.step = 0.01;
  rk.horizon = 200.0;
  rk.record_every = 1000;
  const double d_rk = limit_distance(integrate(p, s, example::start(), rk).back().state);
  IntegrateOptions eu;
  eu.method = Integrator::euler;
  eu.step = 0.1;
  eu.horizon = 200.0;
  eu.record_every = 1000;
  const double d_eu = limit_distance(integrate(p, s, example::start(), eu).back().state);
  o.detail << "T=200 rk4(h=0.01) dist=" << d_rk << " euler(h=0.1) dist=" << d_eu;
  o.require(d_rk <= 1e-2, "rk4 within 1e-2");
  o.require(d_eu <= 5e-2, "euler within 5e-2");
  return o;
}

Outcome discretization_identity() {
  Outcome o;
  const auto p = example::problem();
  const std::vector<std::pair<example::CChoice, example::TauCChoice>> configs{
      {example::CChoice::c025, example::TauCChoice::tc099},
      {example::CChoice::c1_decay, example::TauCChoice::tc025},
      {example::CChoice::c2_decay, example::TauCChoice::tc099}};
  double worst = 0.0;
  for (const auto& [c, tc] : configs) {
    const auto s = example::schedules(c, tc);
    const auto r = prox_ama_run(p, s, example::start(), SolveConfig{});
    IntegrateOptions eu;
    eu.step = 1.0;
    eu.horizon = static_cast<double>(r.iterations_used);
    const auto traj = integrate(p, s, example::start(), eu);
    o.require(traj.samples.size() == r.iterates.samples.size(), "same number of samples");
    for (std::size_t k = 0; k < std::min(traj.samples.size(), r.iterates.samples.size()); ++k) {
      const auto& a = traj.samples[k].state;
      const auto& b = r.iterates.samples[k].state;
      worst = std::max({worst, max_abs_diff(a.x, b.x), max_abs_diff(a.z, b.z), max_abs_diff(a.y, b.y)});
    }
  }
  o.detail << "configs=3 max componentwise difference=" << worst;
  o.require(worst <= 1e-12, "<= 1e-12");
  return o;
}

Outcome stationarity() {
  Outcome o;
  const auto p = example::problem();
  double worst = 0.0, worst_kkt = 0.0;
  for (const auto& v : example::all_variants()) {
    const auto s = example::schedules(v.c, v.tc);
    const auto star = compute_reference(p, s);
    worst_kkt = std::max(worst_kkt, kkt_residual(p, star).max());
    for (double t : {0.0, 1.0, 10.0, 100.0}) {
      const auto g = gamma(p, s, t, star);
      worst = std::max(worst, std::sqrt(g.u.squaredNorm() + g.v.squaredNorm() + g.w.squaredNorm()));
    }
  }
  o.detail << "variants=8 t={0,1,10,100} max |Gamma|=" << worst << " (KKT residual of triples <= " << worst_kkt << ")";
  o.require(worst_kkt <= 1e-10, "verified KKT triple");
  o.require(worst <= 1e-8, "|Gamma| <= 1e-8");
  return o;
}

Outcome lyapunov() {
  Outcome o;
  const auto p = example::problem();
  const auto variants = example::all_variants();
  std::vector<double> violation(variants.size()), final_energy(variants.size());
  std::vector<char> monotone(variants.size());
  for_each_index(
      variants.size(),
      [&](std::size_t i) {
        const auto s = example::schedules(variants[i].c, variants[i].tc);
        IntegrateOptions rk;
        rk.method = Integrator::rk4;
        rk.step = 0.01;
        rk.horizon = example::default_horizon(variants[i].c);
        rk.reference = compute_reference(p, s);
        const auto traj = integrate(p, s, example::start(), rk);
        const auto m = check_energy_monotone(traj);
        monotone[i] = m.passed;
        violation[i] = m.max_violation;
        final_energy[i] = traj.back().energy->energy;
      },
      Execution::parallel);
  for (std::size_t i = 0; i < variants.size(); ++i) {
    o.detail << example::name_of(variants[i].c) << "/" << example::name_of(variants[i].tc) << ": E(T)="
             << final_energy[i] << (monotone[i] ? "" : " NOT monotone") << (i + 1 < variants.size() ? "; " : "");
    o.require(monotone[i] != 0, "monotone " + example::name_of(variants[i].c));
    o.require(final_energy[i] <= 1e-6, "E(T) <= 1e-6 " + example::name_of(variants[i].c));
  }
  return o;
}

Outcome prox_oracle() {
  Outcome o;
  double worst = 0.0;
  for (int kind = 0; kind < 5; ++kind) {
    for (int k = 0; k < 50; ++k) {
      const Eigen::Index n = 1 + (k % 2);
      const auto fn = random_instance(kind, n);
      const double gamma = uniform(0.1, 3.0);
      const Vector x = random_vector(n, 5.0);
      const Vector ref = brute_force_argmin(
          [&](const Vector& y) { return gamma * fn.eval(y) + 0.5 * (y - x).squaredNorm(); }, n);
      worst = std::max(worst, max_abs_diff(fn.prox(gamma, x), ref));
    }
  }
  o.detail << "kinds=5 instances=50 each max deviation=" << worst;
  o.require(worst <= 1e-4, "<= 1e-4");
  return o;
}

Outcome lipschitz() {
  Outcome o;
  const Vector d = (Vector(2) << 1, -2).finished();
  Matrix bm(2, 2);
  bm << 1.0, 0.3, -0.2, 0.8;
  const TwoBlockProblem p(SeparableFunction::quadratic_distance(d, 2.0), SeparableFunction::zero(2),
                          SeparableFunction::l1(2, 0.5), SeparableFunction::zero(2), LinearMap::identity(2),
                          LinearMap::dense(bm), Vector::Zero(2));
  double k_ratio = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Vector s1 = random_vector(2, 10.0), s2 = random_vector(2, 10.0);
    k_ratio = std::max(k_ratio, (x_argmin(p, LinearMap::zero(2), s1) - x_argmin(p, LinearMap::zero(2), s2)).norm() /
                                    (s1 - s2).norm());
  }
  Matrix m2(2, 2);
  m2 << 0.5, 0.1, 0.1, 0.3;
  const double c = 0.5;
  const LinearMap metric = LinearMap::dense(m2);
  const double beta = min_eigenvalue_sym(scaled(c, gram(p.B())) + metric);
  double j_ratio = 0.0;
  for (int k = 0; k < 100; ++k) {
    const Vector v1 = random_vector(2, 5.0), v2 = random_vector(2, 5.0);
    j_ratio = std::max(j_ratio, (z_argmin(p, metric, c, v1, Vector::Zero(2)) - z_argmin(p, metric, c, v2, Vector::Zero(2))).norm() /
                                    (v1 - v2).norm());
  }
  o.detail << "K_t ratio=" << k_ratio << " (1/sigma=" << 1.0 / p.sigma() << "), J_t ratio=" << j_ratio
           << " (c/beta=" << c / beta << ", beta=" << beta << ")";
  o.require(k_ratio <= 1.0 / p.sigma() + 1e-9, "K_t");
  o.require(beta > 0.0, "Cstrong");
  o.require(j_ratio <= c / beta + 1e-9, "J_t");
  return o;
}

Outcome validator() {
  Outcome o;
  const auto p = example::problem();
  const auto grid = default_grid();
  const double eps = 0.005;
  int accepted = 0;
  for (const auto& v : example::all_variants()) {
    const auto s = example::schedules(v.c, v.tc);
    const bool ok = validate(p, s, eps, grid).passed &&
                    validate_corollary(p, s.c, example::tau_schedule(v.c, v.tc), eps, grid).passed;
    accepted += ok;
    o.require(ok, "accept " + example::name_of(v.c) + "/" + example::name_of(v.tc));
  }
  const auto big_c = validate(p, ScalarSchedule::reciprocal_quadratic(1.0, 0.5), MetricSchedule::zero(2),
                              MetricSchedule::scaled_identity(2, ScalarSchedule::constant(1.0)), eps, grid);
  const auto* range = big_c.find("c_range_upper");
  const auto loose = validate_corollary(p, ScalarSchedule::constant(0.25), ScalarSchedule::constant(4.4), eps, grid);
  const auto* coupling = loose.find("coupling_c_tau");
  o.detail << "accepted " << accepted << "/8 example configurations; c(t)=1/(t^2+1)+0.5 rejected="
           << (!big_c.passed) << " (c_range_upper); tau c |B|^2 = 1.1 rejected=" << (!loose.passed)
           << " (coupling_c_tau)";
  o.require(!big_c.passed && range && !range->passed, "reject nonconstant c above sigma/|A|^2 - eps");
  o.require(!loose.passed && coupling && !coupling->passed, "reject tau c |B|^2 > 1");
  return o;
}

Outcome norms() {
  Outcome o;
  const auto p = example::problem();
  const double a = operator_norm(p.A()), b = operator_norm(p.B());
  o.detail.precision(17);
  o.detail << "|A|=" << a << " |B|=" << b;
  o.require(std::abs(a - 1.0) <= 1e-8, "|A|");
  o.require(std::abs(b - 1.0) <= 1e-8, "|B|");
  return o;
}

Outcome duality() {
  Outcome o;
  const auto p = example::problem();
  const auto r = prox_ama_run(p, example::schedules(example::CChoice::c025, example::TauCChoice::tc099),
                              example::start(), SolveConfig{});
  const double primal = primal_objective(p, r.final.x, r.final.z);
  const double dual = dual_objective(p, r.final.y);
  o.detail.precision(12);
  o.detail << "primal=" << primal << " dual=" << dual << " gap=" << std::abs(primal - dual);
  o.require(std::abs(primal - dual) <= 1e-5, "gap <= 1e-5");
  o.require(std::abs(primal - 0.5) <= 1e-5, "value 0.5");
  return o;
}

Outcome uniqueness() {
  Outcome o;
  const auto p = example::problem();
  const auto s = example::schedules(example::CChoice::c025, example::TauCChoice::tc099);
  std::vector<Vector> finals;
  for (int k = 0; k < 5; ++k) {
    const PrimalDualState s0{example::start().x, random_vector(2, 10.0), random_vector(2, 10.0), 0.0};
    const auto r = prox_ama_run(p, s, s0, SolveConfig{});
    o.require(r.status == SolveStatus::converged, "converged");
    finals.push_back(r.final.x);
  }
  double spread = 0.0;
  for (const auto& a : finals)
    for (const auto& b : finals) spread = std::max(spread, max_abs_diff(a, b));
  o.detail << "starts=5 max spread of final x=" << spread;
  o.require(spread <= 1e-5, "spread <= 1e-5");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"Example reproduction (discrete)", example_discrete},
      {"Example reproduction (continuous)", example_continuous},
      {"Discretization identity", discretization_identity},
      {"Stationarity", stationarity},
      {"Lyapunov monotonicity", lyapunov},
      {"Prox oracle", prox_oracle},
      {"Lipschitz properties", lipschitz},
      {"Schedule validator", validator},
      {"Operator norms", norms},
      {"Duality", duality},
      {"x*-uniqueness", uniqueness},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  %2zu  %-34s %s  (%.2fs)\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.str().c_str(), secs);
    std::fflush(stdout);
    failed += !o.passed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
