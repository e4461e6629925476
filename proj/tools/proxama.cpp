// proxama: validate, solve and reproduce two-block problems from the command line.
//
// Exit codes: 0 ok, 1 validation or capability failure, 2 parse/usage error,
// 3 solver error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "proxama/batch.hpp"
#include "proxama/diagnostics.hpp"
#include "proxama/discrete.hpp"
#include "proxama/dynamics.hpp"
#include "proxama/errors.hpp"
#include "proxama/paper_example.hpp"
#include "proxama/problem_file.hpp"
#include "proxama/schedules.hpp"

namespace {

using namespace proxama;

constexpr int kOk = 0;
constexpr int kRejected = 1;
constexpr int kParse = 2;
constexpr int kSolver = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<double> parse_grid(const std::string& spec) {
  if (spec.empty() || spec == "default") return default_grid();
  std::vector<double> out;
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw UsageError("--grid: bad number '" + s + "'");
    return v;
  };
  if (spec.find(':') != std::string::npos) {
    std::stringstream ss(spec);
    std::string a, h, b;
    std::getline(ss, a, ':');
    std::getline(ss, h, ':');
    std::getline(ss, b);
    const double lo = number(a), step = number(h), hi = number(b);
    if (!(step > 0) || hi < lo) throw UsageError("--grid: expected start:step:stop with step > 0");
    const long n = std::lround(std::floor((hi - lo) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(lo + static_cast<double>(i) * step);
    return out;
  }
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(number(item));
  return out;
}

/// Default eps: small, but inside (0, sigma / (2 |A|^2)).
double default_eps(const TwoBlockProblem& p) {
  const double cap = p.sigma() / (2.0 * p.norm_A() * p.norm_A());
  return std::min(0.005, 0.5 * cap);
}

ValidationReport validate_file(const ProblemFile& file, double eps, const std::vector<double>& grid) {
  if (file.prox_friendly()) return validate_corollary(file.problem, file.c, *file.tau, eps, grid);
  return validate(file.problem, file.schedules(), eps, grid);
}

/// Plain AMA only needs the step-size rules on c.
ValidationReport validate_ama(const ProblemFile& file, double eps, const std::vector<double>& grid) {
  const auto& p = file.problem;
  ValidationReport r = validate(p, file.c, MetricSchedule::zero(p.dim_x()), MetricSchedule::zero(p.dim_z()),
                                eps, grid);
  std::vector<ValidationCheck> kept;
  for (const auto& c : r.checks) {
    if (c.rule.rfind("c_", 0) == 0) kept.push_back(c);
  }
  r.checks = kept;
  r.passed = std::all_of(kept.begin(), kept.end(), [](const auto& c) { return c.passed; });
  r.mode = "ama-step-size";
  return r;
}

std::string failed_rules(const ValidationReport& r) {
  std::string out;
  for (const auto& c : r.checks) {
    if (!c.passed) out += (out.empty() ? "" : ", ") + c.rule;
  }
  return out;
}

struct SolveFlags {
  std::string mode = "prox-ama";
  std::optional<double> step;
  std::optional<double> horizon;
  std::optional<int> max_iters;
  std::optional<double> tol;
  std::optional<int> record_every;
  std::optional<double> eps;
  std::string grid = "default";
  std::string out_prefix = "proxama";
  bool force = false;
  bool energy = false;
};

void add_solve_flags(CLI::App* cmd, SolveFlags& f, bool with_mode) {
  if (with_mode) {
    cmd->add_option("--mode", f.mode, "continuous-euler | continuous-rk4 | prox-ama | ama")
        ->check(CLI::IsMember({"continuous-euler", "continuous-rk4", "prox-ama", "ama"}));
  }
  cmd->add_option("--step", f.step, "integration step (continuous modes)");
  cmd->add_option("--horizon", f.horizon, "integration horizon (continuous modes)");
  cmd->add_option("--max-iters", f.max_iters, "iteration cap (discrete modes)");
  cmd->add_option("--tol", f.tol, "KKT and feasibility tolerance");
  cmd->add_option("--record-every", f.record_every, "keep every n-th step/iterate");
  cmd->add_option("--eps", f.eps, "validation margin");
  cmd->add_option("--grid", f.grid, "validation grid: default | start:step:stop | v1,v2,...");
  cmd->add_option("--out-prefix", f.out_prefix, "writes <prefix>.csv and <prefix>.report.json");
  cmd->add_flag("--force", f.force, "run even if the schedules fail validation");
  cmd->add_flag("--energy", f.energy, "record the energy against a high-accuracy saddle point");
}

void write_outputs(const std::string& prefix, const Trajectory& traj, const SummaryReport& rep) {
  {
    std::ofstream csv(prefix + ".csv", std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + prefix + ".csv");
    write_trajectory_csv(csv, traj);
  }
  std::ofstream out(prefix + ".report.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + prefix + ".report.json");
  out << to_json(rep).dump(2) << '\n';
}

int run_solve(const ProblemFile& file, const SolveFlags& f) {
  const auto& p = file.problem;
  const bool ama = f.mode == "ama";
  if (ama && (!p.h1().is_zero() || !p.h2().is_zero())) {
    throw CapabilityError("ama: requires h1 = h2 = 0 (got " + p.h1().kind_name() + ", " +
                          p.h2().kind_name() + ")");
  }

  const double eps = f.eps.value_or(default_eps(p));
  const auto grid = parse_grid(f.grid);
  const ValidationReport validation = ama ? validate_ama(file, eps, grid) : validate_file(file, eps, grid);
  std::vector<std::string> warnings;
  if (!validation.passed) {
    if (!f.force) {
      std::cout << to_json(validation).dump(2) << '\n';
      std::cerr << "error: schedules fail validation (" << failed_rules(validation)
                << "); use --force to run anyway\n";
      return kRejected;
    }
    warnings.push_back("WARNING: schedules FAIL validation (" + failed_rules(validation) +
                       "); run forced, convergence is not guaranteed");
  }

  const Schedules sched = ama ? Schedules{file.c, MetricSchedule::zero(p.dim_x()), MetricSchedule::zero(p.dim_z())}
                              : file.schedules();
  ZSolveOptions z;
  z.require_cstrong = !ama;
  const double tol = f.tol.value_or(file.solver.tol);
  const int record_every = f.record_every.value_or(file.solver.record_every);

  std::optional<PrimalDualState> reference;
  if (f.energy) {
    try {
      reference = compute_reference(p, sched, 500000, z);
    } catch (const std::exception& e) {
      warnings.push_back(std::string("energy unavailable: ") + e.what());
    }
  }

  Trajectory traj;
  SummaryReport rep;
  int code = kOk;
  if (f.mode == "prox-ama" || ama) {
    SolveConfig cfg;
    cfg.max_iters = f.max_iters.value_or(file.solver.max_iters);
    cfg.tol_kkt = cfg.tol_feas = tol;
    cfg.record_every = record_every;
    cfg.z = z;
    SolveResult result = ama ? ama_run(p, file.c, file.initial, cfg) : prox_ama_run(p, sched, file.initial, cfg);
    if (reference) attach_energy(result.iterates, EnergyFunctional(p, sched, *reference));
    rep = report(result, p, tol);
    traj = std::move(result.iterates);
    if (result.status == SolveStatus::error) code = kSolver;
  } else {
    IntegrateOptions opts;
    opts.method = f.mode == "continuous-rk4" ? Integrator::rk4 : Integrator::euler;
    opts.step = f.step.value_or(file.solver.step);
    opts.horizon = f.horizon.value_or(file.solver.horizon);
    opts.record_every = record_every;
    opts.reference = reference;
    opts.z = z;
    if (!(opts.step > 0.0 && opts.step <= 1.0)) throw UsageError("--step must lie in (0, 1]");
    if (!(opts.horizon >= opts.step)) throw UsageError("--horizon must be >= --step");
    try {
      traj = integrate(p, sched, file.initial, opts);
      rep = report(traj, p, tol);
    } catch (const IntegrationError& e) {
      traj = e.partial();
      rep = report(traj, p, tol);
      rep.status = "error";
      rep.error = e.what();
      code = kSolver;
    }
  }

  rep.validation = validation;
  rep.warnings.insert(rep.warnings.begin(), warnings.begin(), warnings.end());
  write_outputs(f.out_prefix, traj, rep);
  std::cout << to_json(rep).dump(2) << '\n';
  return code;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"Proximal AMA and its continuous-time dynamics for two-block problems"};
  app.require_subcommand(1);

  std::string problem_path;
  double eps_value = 0.0;
  std::string grid_spec = "default";
  auto* validate_cmd = app.add_subcommand("validate", "check the schedules of a problem file");
  validate_cmd->add_option("problem", problem_path, "problem file (JSON)")->required();
  auto* eps_opt = validate_cmd->add_option("--eps", eps_value, "validation margin");
  validate_cmd->add_option("--grid", grid_spec, "default | start:step:stop | v1,v2,...");

  SolveFlags solve_flags;
  auto* solve_cmd = app.add_subcommand("solve", "run a solver on a problem file");
  solve_cmd->add_option("problem", problem_path, "problem file (JSON)")->required();
  add_solve_flags(solve_cmd, solve_flags, true);

  SolveFlags example_flags;
  std::string c_name = "c025", tc_name = "tc099", emit_path;
  auto* example_cmd = app.add_subcommand("paper-example", "run the embedded two-dimensional example");
  example_cmd->add_option("--c", c_name, "c025 | c199 | c1-decay | c2-decay")
      ->check(CLI::IsMember({"c025", "c199", "c1-decay", "c2-decay"}));
  example_cmd->add_option("--tc", tc_name, "tau(t)c(t): tc025 | tc099")->check(CLI::IsMember({"tc025", "tc099"}));
  example_cmd->add_option("--emit-problem", emit_path, "write the variant as a problem file and exit");
  add_solve_flags(example_cmd, example_flags, true);

  auto* norm_cmd = app.add_subcommand("norm", "print the operator norms of A and B");
  norm_cmd->add_option("problem", problem_path, "problem file (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  if (*validate_cmd) {
    const ProblemFile file = load_problem_file(problem_path);
    const double eps = eps_opt->count() ? eps_value : default_eps(file.problem);
    const ValidationReport r = validate_file(file, eps, parse_grid(grid_spec));
    std::cout << to_json(r).dump(2) << '\n';
    if (!r.passed) std::cerr << "validation failed: " << failed_rules(r) << '\n';
    return r.passed ? kOk : kRejected;
  }
  if (*solve_cmd) return run_solve(load_problem_file(problem_path), solve_flags);
  if (*example_cmd) {
    const ProblemFile file = example::file(*example::parse_c(c_name), *example::parse_tau_c(tc_name));
    if (!emit_path.empty()) {
      std::ofstream out(emit_path, std::ios::binary);
      if (!out) throw std::runtime_error("cannot write " + emit_path);
      out << serialize_problem_file(file);
      return kOk;
    }
    return run_solve(file, example_flags);
  }
  if (*norm_cmd) {
    const ProblemFile file = load_problem_file(problem_path);
    nlohmann::json out = {{"A", file.problem.norm_A()}, {"B", file.problem.norm_B()}};
    std::cout << out.dump(2) << '\n';
    return kOk;
  }
  return kParse;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kParse;
  } catch (const CapabilityError& e) {
    std::cerr << "capability error: " << e.what() << '\n';
    return kRejected;
  } catch (const ProblemError& e) {
    std::cerr << "problem error: " << e.what() << '\n';
    return kRejected;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kRejected;
  } catch (const std::exception& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return kSolver;
  }
}
