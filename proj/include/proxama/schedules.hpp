#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "proxama/linop.hpp"
#include "proxama/problem.hpp"

namespace proxama {

/// Positive scalar parameter t -> s(t) on [0, inf) with an analytic derivative.
class ScalarSchedule {
 public:
  struct Constant {
    double value;
  };
  /// 1/(t^2 + a) + offset
  struct ReciprocalQuadratic {
    double a;
    double offset;
  };
  /// 1/sqrt(t + a) + offset
  struct ReciprocalSqrt {
    double a;
    double offset;
  };
  /// numerator / other(t)
  struct CoupledReciprocal {
    double numerator;
    std::shared_ptr<const ScalarSchedule> other;
  };
  using Kind = std::variant<Constant, ReciprocalQuadratic, ReciprocalSqrt, CoupledReciprocal>;

  static ScalarSchedule constant(double value);
  static ScalarSchedule reciprocal_quadratic(double a, double offset);
  static ScalarSchedule reciprocal_sqrt(double a, double offset);
  static ScalarSchedule coupled_reciprocal(double numerator, const ScalarSchedule& other);

  double value_at(double t) const;
  double derivative_at(double t) const;
  bool is_constant() const;
  const Kind& kind() const { return kind_; }

 private:
  explicit ScalarSchedule(Kind kind) : kind_(std::move(kind)) {}
  Kind kind_;
};

/// M(t) evaluated at one instant. tau is set when M = (1/tau) Id - c B^*B
/// with the same c as the dynamics, which turns the z-update into one prox.
struct MetricSnapshot {
  LinearMap M;
  std::optional<double> tau;
};

/// Symmetric positive semidefinite operator-valued schedule t -> M(t).
class MetricSchedule {
 public:
  struct Zero {};
  struct ScaledIdentity {
    ScalarSchedule mu;
  };
  /// (1/tau(t)) Id - c(t) B^*B
  struct ProxFriendly {
    ScalarSchedule tau;
    ScalarSchedule c;
    LinearMap B;
  };
  struct ConstantDense {
    LinearMap M;
  };
  using Kind = std::variant<Zero, ScaledIdentity, ProxFriendly, ConstantDense>;

  static MetricSchedule zero(Eigen::Index dim);
  static MetricSchedule scaled_identity(Eigen::Index dim, ScalarSchedule mu);
  static MetricSchedule prox_friendly(ScalarSchedule tau, ScalarSchedule c, LinearMap B);
  static MetricSchedule constant_dense(LinearMap M);

  Eigen::Index dim() const { return dim_; }
  const Kind& kind() const { return kind_; }

  LinearMap at(double t) const;
  LinearMap derivative_at(double t) const;
  /// at(t), tagged with tau when this is a prox-friendly metric built on c_t.
  MetricSnapshot snapshot(double t, double c_t) const;

 private:
  MetricSchedule(Kind kind, Eigen::Index dim) : kind_(std::move(kind)), dim_(dim) {}
  Kind kind_;
  Eigen::Index dim_;
};

/// The time-varying parameters of the dynamics: c(t), M1(t), M2(t).
struct Schedules {
  ScalarSchedule c;
  MetricSchedule m1;
  MetricSchedule m2;
};

/// The Remark-style configuration M1 = 0, M2 = (1/tau) Id - c B^*B.
Schedules prox_friendly_schedules(const TwoBlockProblem& p, const ScalarSchedule& c,
                                  const ScalarSchedule& tau);

struct ValidationCheck {
  std::string rule;
  bool passed = false;
  double witness = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct ValidationReport {
  bool passed = false;
  std::vector<ValidationCheck> checks;
  /// "theorem-variable-c", "theorem-constant-c" or "corollary-prox-friendly".
  std::string mode;
  double eps = 0.0;
  std::vector<double> grid;
  /// inf over the grid of lambda_min(c(t) B^*B + M2(t)).
  double cstrong_beta = 0.0;
  bool cweak = false;
  bool cstrong = false;

  const ValidationCheck* find(const std::string& rule) const;
};

/// {0, 0.1, ..., 100} followed by a log-spaced tail up to 1e4.
std::vector<double> default_grid();

/// Checks every hypothesis of the convergence theorem on the grid:
/// the range, monotonicity and Lipschitz bound of c; M_i - (L_hi/4) Id PSD;
/// Loewner monotonicity and bounded derivatives of M1, M2; and either
/// M2 - (L_h2/4) Id >= alpha Id or B^*B >= beta Id.
ValidationReport validate(const TwoBlockProblem& p, const ScalarSchedule& c, const MetricSchedule& m1,
                          const MetricSchedule& m2, double eps, std::span<const double> grid);
ValidationReport validate(const TwoBlockProblem& p, const Schedules& s, double eps,
                          std::span<const double> grid);

/// Corollary rules for M1 = 0, M2 = (1/tau) Id - c B^*B.
ValidationReport validate_corollary(const TwoBlockProblem& p, const ScalarSchedule& c,
                                    const ScalarSchedule& tau, double eps,
                                    std::span<const double> grid);

}  // namespace proxama
