#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "proxama/diagnostics.hpp"
#include "proxama/problem.hpp"
#include "proxama/schedules.hpp"
#include "proxama/trajectory.hpp"

namespace proxama {

struct SolverSettings {
  int max_iters = 20000;
  double tol = 1e-6;
  double step = 0.01;
  double horizon = 200.0;
  int record_every = 1;
};

/// A problem instance together with its schedules, start and solver settings,
/// as read from a JSON problem file:
///
///   {
///     "format": "proxama-problem/1",        optional
///     "name": "...",                        optional
///     "functions": {"f": F, "h1": F, "g": F, "h2": F},   h1, h2 default to zero
///     "operators": {"A": MAT, "B": MAT},
///     "b": [..],
///     "schedules": {"c": S, "tau": S, "M1": M, "M2": M}, tau optional, M1/M2 default zero
///     "initial": {"x": [..], "z": [..], "y": [..]},     optional, defaults to 0
///     "solver": {"max_iters", "tol", "step", "horizon", "record_every"}   optional
///   }
///   F   = {"kind": "quadratic_distance", "d": [..], "weight": w} | {"kind": "l1", "weight": w}
///       | {"kind": "box_indicator", "lo": [..], "hi": [..]} | {"kind": "zero"}
///       | {"kind": "quadratic_form", "Q": MAT, "q": [..]}
///   MAT = {"rows": r, "cols": n, "data": [[row 1], ..., [row r]]}   (row-major)
///   S   = {"kind": "constant", "value": v} | {"kind": "reciprocal_quadratic", "a": a, "offset": o}
///       | {"kind": "reciprocal_sqrt", "a": a, "offset": o}
///       | {"kind": "coupled_reciprocal", "numerator": n, "other": S}
///   M   = {"kind": "zero"} | {"kind": "scaled_identity", "mu": S}
///       | {"kind": "prox_friendly"}   (1/tau) Id - c B^*B, needs schedules.tau
///       | {"kind": "constant_dense", "matrix": MAT}
///
/// Unknown keys are rejected. Infinite box bounds are written "inf" / "-inf".
struct ProblemFile {
  std::string name;
  TwoBlockProblem problem;
  ScalarSchedule c;
  std::optional<ScalarSchedule> tau;
  MetricSchedule m1;
  MetricSchedule m2;
  PrimalDualState initial;
  SolverSettings solver;

  Schedules schedules() const { return Schedules{c, m1, m2}; }
  /// M1 = 0 and M2 = (1/tau) Id - c B^*B.
  bool prox_friendly() const;
};

/// Syntax or content error in a problem file. field is a JSON pointer to the
/// offending value; line is set for syntax errors.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::string field, std::optional<int> line = std::nullopt)
      : std::runtime_error(what), field_(std::move(field)), line_(line) {}
  const std::string& field() const { return field_; }
  std::optional<int> line() const { return line_; }

 private:
  std::string field_;
  std::optional<int> line_;
};

ProblemFile parse_problem_file(std::string_view text);
ProblemFile load_problem_file(const std::string& path);

nlohmann::json to_json(const ProblemFile& file);
std::string serialize_problem_file(const ProblemFile& file);

nlohmann::json to_json(const ValidationReport& report);
nlohmann::json to_json(const SummaryReport& report);
nlohmann::json to_json(const PrimalDualState& state);

/// Header: t (or k for discrete runs), x1.., z1.., y1.., feas_residual, kkt_rx,
/// kkt_rz, and energy when every sample carries one. Values use %.17g.
std::string csv_header(const Trajectory& traj);
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace proxama
