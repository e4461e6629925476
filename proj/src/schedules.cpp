#include "proxama/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "proxama/errors.hpp"
#include "proxama/kernels.hpp"

namespace proxama {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Eigenvalue checks of "M is PSD" / "M(s) - M(t) is PSD" accept this much roundoff.
constexpr double kPsdTolerance = 1e-10;
// Anything at or below this counts as zero for "exists alpha > 0" style rules.
constexpr double kPositivity = 1e-12;

void require_time(double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("schedule evaluated at negative time");
}

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw std::invalid_argument("validate: empty time grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0) || !std::isfinite(grid[i])) {
      throw std::invalid_argument("validate: grid points must be finite and nonnegative");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("validate: grid must be strictly increasing");
    }
  }
}

void check_eps(const TwoBlockProblem& p, double eps) {
  const double limit = p.sigma() / (2.0 * p.norm_A() * p.norm_A());
  if (!(eps > 0.0) || !(eps < limit)) {
    throw std::invalid_argument("validate: eps must lie in (0, sigma/(2|A|^2)) = (0, " +
                                std::to_string(limit) + ")");
  }
}

void add(ValidationReport& r, std::string rule, bool passed, double witness, double threshold,
         std::string detail) {
  r.checks.push_back({std::move(rule), passed, witness, threshold, std::move(detail)});
}

double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }
double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

void add_c_rules(ValidationReport& r, const TwoBlockProblem& p, const ScalarSchedule& c, double eps,
                 std::span<const double> grid) {
  std::vector<double> values(grid.size()), slopes(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    values[i] = c.value_at(grid[i]);
    slopes[i] = c.derivative_at(grid[i]);
  }
  const double norm_a2 = p.norm_A() * p.norm_A();
  const bool constant = c.is_constant();
  const double upper = (constant ? 2.0 : 1.0) * p.sigma() / norm_a2 - eps;

  add(r, "c_range_lower", min_of(values) >= eps, min_of(values), eps, "min c(t) >= eps");
  add(r, "c_range_upper", max_of(values) <= upper, max_of(values), upper,
      constant ? "constant c <= 2 sigma/|A|^2 - eps" : "max c(t) <= sigma/|A|^2 - eps");

  double rise = max_of(slopes);
  for (std::size_t i = 1; i < values.size(); ++i) rise = std::max(rise, values[i] - values[i - 1]);
  add(r, "c_decreasing", rise <= 0.0, rise, 0.0, "max of c'(t) and c(t_{i+1}) - c(t_i)");

  double lipschitz = 0.0;
  for (double s : slopes) lipschitz = std::max(lipschitz, std::abs(s));
  add(r, "c_lipschitz", std::isfinite(lipschitz), lipschitz, std::numeric_limits<double>::infinity(),
      "sup |c'(t)| on the grid");
}

void finish(ValidationReport& r) {
  r.passed = std::all_of(r.checks.begin(), r.checks.end(), [](const auto& c) { return c.passed; });
}

void add_cstrong(ValidationReport& r, const TwoBlockProblem& p, const ScalarSchedule& c,
                 const MetricSchedule& m2, std::span<const double> grid) {
  const LinearMap btb = gram(p.B());
  const auto betas = min_eigenvalues_on_grid(
      [&](double t) { return LinearMap::sum(scaled(c.value_at(t), btb), m2.at(t)); }, grid);
  r.cstrong_beta = min_of(betas);
  r.cweak = std::all_of(betas.begin(), betas.end(), [](double b) { return b > kPositivity; });
  r.cstrong = r.cstrong_beta > kPositivity;
}

}  // namespace

// ---------------------------------------------------------------------------
// ScalarSchedule

ScalarSchedule ScalarSchedule::constant(double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument("constant schedule must be positive and finite");
  }
  return ScalarSchedule(Constant{value});
}

ScalarSchedule ScalarSchedule::reciprocal_quadratic(double a, double offset) {
  if (!(a > 0.0) || !(offset >= 0.0)) {
    throw std::invalid_argument("reciprocal_quadratic needs a > 0 and offset >= 0");
  }
  return ScalarSchedule(ReciprocalQuadratic{a, offset});
}

ScalarSchedule ScalarSchedule::reciprocal_sqrt(double a, double offset) {
  if (!(a > 0.0) || !(offset >= 0.0)) {
    throw std::invalid_argument("reciprocal_sqrt needs a > 0 and offset >= 0");
  }
  return ScalarSchedule(ReciprocalSqrt{a, offset});
}

ScalarSchedule ScalarSchedule::coupled_reciprocal(double numerator, const ScalarSchedule& other) {
  if (!(numerator > 0.0) || !std::isfinite(numerator)) {
    throw std::invalid_argument("coupled_reciprocal needs a positive numerator");
  }
  return ScalarSchedule(CoupledReciprocal{numerator, std::make_shared<const ScalarSchedule>(other)});
}

double ScalarSchedule::value_at(double t) const {
  require_time(t);
  return std::visit(Overloaded{
                        [](const Constant& k) { return k.value; },
                        [t](const ReciprocalQuadratic& k) { return 1.0 / (t * t + k.a) + k.offset; },
                        [t](const ReciprocalSqrt& k) { return 1.0 / std::sqrt(t + k.a) + k.offset; },
                        [t](const CoupledReciprocal& k) { return k.numerator / k.other->value_at(t); },
                    },
                    kind_);
}

double ScalarSchedule::derivative_at(double t) const {
  require_time(t);
  return std::visit(Overloaded{
                        [](const Constant&) { return 0.0; },
                        [t](const ReciprocalQuadratic& k) {
                          const double den = t * t + k.a;
                          return -2.0 * t / (den * den);
                        },
                        [t](const ReciprocalSqrt& k) { return -0.5 * std::pow(t + k.a, -1.5); },
                        [t](const CoupledReciprocal& k) {
                          const double v = k.other->value_at(t);
                          return -k.numerator * k.other->derivative_at(t) / (v * v);
                        },
                    },
                    kind_);
}

bool ScalarSchedule::is_constant() const {
  return std::visit(Overloaded{
                        [](const Constant&) { return true; },
                        [](const CoupledReciprocal& k) { return k.other->is_constant(); },
                        [](const auto&) { return false; },
                    },
                    kind_);
}

// ---------------------------------------------------------------------------
// MetricSchedule

MetricSchedule MetricSchedule::zero(Eigen::Index dim) {
  if (dim <= 0) throw std::invalid_argument("metric dimension must be positive");
  return MetricSchedule(Zero{}, dim);
}

MetricSchedule MetricSchedule::scaled_identity(Eigen::Index dim, ScalarSchedule mu) {
  if (dim <= 0) throw std::invalid_argument("metric dimension must be positive");
  return MetricSchedule(ScaledIdentity{std::move(mu)}, dim);
}

MetricSchedule MetricSchedule::prox_friendly(ScalarSchedule tau, ScalarSchedule c, LinearMap B) {
  const auto dim = B.dim_in();
  return MetricSchedule(ProxFriendly{std::move(tau), std::move(c), std::move(B)}, dim);
}

MetricSchedule MetricSchedule::constant_dense(LinearMap M) {
  if (!M.is_square()) throw std::invalid_argument("constant_dense metric must be square");
  const auto dim = M.dim_in();
  return MetricSchedule(ConstantDense{std::move(M)}, dim);
}

LinearMap MetricSchedule::at(double t) const {
  require_time(t);
  return std::visit(Overloaded{
                        [&](const Zero&) { return LinearMap::zero(dim_); },
                        [&](const ScaledIdentity& k) {
                          return LinearMap::scaled_identity(dim_, k.mu.value_at(t));
                        },
                        [&](const ProxFriendly& k) {
                          return LinearMap::sum(
                              LinearMap::scaled_identity(dim_, 1.0 / k.tau.value_at(t)),
                              scaled(-k.c.value_at(t), gram(k.B)));
                        },
                        [&](const ConstantDense& k) { return k.M; },
                    },
                    kind_);
}

LinearMap MetricSchedule::derivative_at(double t) const {
  require_time(t);
  return std::visit(Overloaded{
                        [&](const ScaledIdentity& k) {
                          return LinearMap::scaled_identity(dim_, k.mu.derivative_at(t));
                        },
                        [&](const ProxFriendly& k) {
                          const double tau = k.tau.value_at(t);
                          return LinearMap::sum(
                              LinearMap::scaled_identity(dim_, -k.tau.derivative_at(t) / (tau * tau)),
                              scaled(-k.c.derivative_at(t), gram(k.B)));
                        },
                        [&](const auto&) { return LinearMap::zero(dim_); },
                    },
                    kind_);
}

MetricSnapshot MetricSchedule::snapshot(double t, double c_t) const {
  MetricSnapshot snap{at(t), std::nullopt};
  if (const auto* pf = std::get_if<ProxFriendly>(&kind_)) {
    if (pf->c.value_at(t) == c_t) snap.tau = pf->tau.value_at(t);
  }
  return snap;
}

Schedules prox_friendly_schedules(const TwoBlockProblem& p, const ScalarSchedule& c,
                                  const ScalarSchedule& tau) {
  return Schedules{c, MetricSchedule::zero(p.dim_x()), MetricSchedule::prox_friendly(tau, c, p.B())};
}

// ---------------------------------------------------------------------------
// Validation

const ValidationCheck* ValidationReport::find(const std::string& rule) const {
  for (const auto& c : checks) {
    if (c.rule == rule) return &c;
  }
  return nullptr;
}

std::vector<double> default_grid() {
  std::vector<double> grid;
  for (int i = 0; i <= 1000; ++i) grid.push_back(0.1 * i);
  constexpr int kTail = 40;
  for (int i = 1; i <= kTail; ++i) grid.push_back(100.0 * std::pow(100.0, static_cast<double>(i) / kTail));
  return grid;
}

ValidationReport validate(const TwoBlockProblem& p, const ScalarSchedule& c, const MetricSchedule& m1,
                          const MetricSchedule& m2, double eps, std::span<const double> grid) {
  check_grid(grid);
  check_eps(p, eps);
  if (m1.dim() != p.dim_x()) {
    throw DimensionError("validate: M1", static_cast<std::size_t>(p.dim_x()),
                         static_cast<std::size_t>(m1.dim()));
  }
  if (m2.dim() != p.dim_z()) {
    throw DimensionError("validate: M2", static_cast<std::size_t>(p.dim_z()),
                         static_cast<std::size_t>(m2.dim()));
  }

  ValidationReport r;
  r.mode = c.is_constant() ? "theorem-constant-c" : "theorem-variable-c";
  r.eps = eps;
  r.grid.assign(grid.begin(), grid.end());

  add_c_rules(r, p, c, eps, grid);

  struct Block {
    const char* name;
    const MetricSchedule& m;
    double lipschitz;
  };
  const Block blocks[] = {{"m1", m1, p.lipschitz_h1()}, {"m2", m2, p.lipschitz_h2()}};
  double alpha = 0.0;
  for (const auto& blk : blocks) {
    const std::string name = blk.name;
    const auto n = blk.m.dim();
    const auto shifted = min_eigenvalues_on_grid(
        [&](double t) {
          return difference(blk.m.at(t), LinearMap::scaled_identity(n, blk.lipschitz / 4.0));
        },
        grid);
    const double shifted_min = min_of(shifted);
    add(r, name + "_shifted_psd", shifted_min >= -kPsdTolerance, shifted_min, -kPsdTolerance,
        "min lambda_min(M(t) - (L_h/4) Id)");
    if (name == "m2") alpha = shifted_min;

    double drop = std::numeric_limits<double>::infinity();
    if (grid.size() > 1) {
      std::vector<double> pairs(grid.size() - 1);
      for_each_index(
          pairs.size(),
          [&](std::size_t k) {
            pairs[k] = min_eigenvalue_sym(difference(blk.m.at(grid[k]), blk.m.at(grid[k + 1])));
          },
          Execution::parallel);
      drop = min_of(pairs);
    }
    add(r, name + "_loewner_decreasing", drop >= -kPsdTolerance, drop, -kPsdTolerance,
        "min lambda_min(M(t_i) - M(t_{i+1}))");

    const double slope = max_of(operator_norms_on_grid([&](double t) { return blk.m.derivative_at(t); }, grid));
    add(r, name + "_derivative_bounded", std::isfinite(slope), slope,
        std::numeric_limits<double>::infinity(), "sup |dM/dt| on the grid");
  }

  const double beta_b = min_eigenvalue_sym(gram(p.B()));
  const bool cond1 = alpha > kPositivity;
  const bool cond2 = beta_b > kPositivity;
  add(r, "alpha_or_beta", cond1 || cond2, std::max(alpha, beta_b), kPositivity,
      std::string("condition 1 (M2 - (L_h2/4) Id >= alpha Id): ") + (cond1 ? "holds" : "fails") +
          "; condition 2 (B^*B >= beta Id): " + (cond2 ? "holds" : "fails"));

  add_cstrong(r, p, c, m2, grid);
  finish(r);
  return r;
}

ValidationReport validate(const TwoBlockProblem& p, const Schedules& s, double eps,
                          std::span<const double> grid) {
  return validate(p, s.c, s.m1, s.m2, eps, grid);
}

ValidationReport validate_corollary(const TwoBlockProblem& p, const ScalarSchedule& c,
                                    const ScalarSchedule& tau, double eps,
                                    std::span<const double> grid) {
  check_grid(grid);
  check_eps(p, eps);

  ValidationReport r;
  r.mode = "corollary-prox-friendly";
  r.eps = eps;
  r.grid.assign(grid.begin(), grid.end());

  add_c_rules(r, p, c, eps, grid);

  const double norm_b2 = p.norm_B() * p.norm_B();
  const double lh2 = p.lipschitz_h2();
  double tau_rise_min = std::numeric_limits<double>::infinity();
  double growth = 0.0;
  double coupling = -std::numeric_limits<double>::infinity();
  double coupling_slope = -std::numeric_limits<double>::infinity();
  double strict_slack = std::numeric_limits<double>::infinity();
  double prev_tau = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    const double tau_t = tau.value_at(t);
    const double dtau = tau.derivative_at(t);
    const double c_t = c.value_at(t);
    tau_rise_min = std::min(tau_rise_min, dtau);
    if (i > 0) tau_rise_min = std::min(tau_rise_min, tau_t - prev_tau);
    prev_tau = tau_t;

    const double ratio = dtau / (tau_t * tau_t);
    growth = std::max(growth, ratio);

    const double lhs = c_t * tau_t * norm_b2;
    const double rhs = 1.0 - tau_t * lh2 / 4.0;
    coupling = std::max(coupling, lhs - rhs);
    strict_slack = std::min(strict_slack, rhs - lhs);

    const double slope_gap = -c.derivative_at(t) * norm_b2 - ratio;
    coupling_slope = std::max(coupling_slope, slope_gap - 1e-12 * (1.0 + std::abs(ratio)));
  }

  add(r, "tau_increasing", tau_rise_min >= 0.0, tau_rise_min, 0.0,
      "min of tau'(t) and tau(t_{i+1}) - tau(t_i)");
  add(r, "tau_growth_bounded", std::isfinite(growth), growth, std::numeric_limits<double>::infinity(),
      "sup tau'(t)/tau(t)^2 on the grid");
  add(r, "coupling_c_tau", coupling <= kPositivity, coupling, 0.0,
      "max of c(t) tau(t) |B|^2 - (1 - tau(t) L_h2/4)");
  add(r, "coupling_derivative", coupling_slope <= 0.0, coupling_slope, 0.0,
      "max of -c'(t)|B|^2 - tau'(t)/tau(t)^2");

  const double beta_b = min_eigenvalue_sym(gram(p.B()));
  const bool cond1 = strict_slack > kPositivity;
  const bool cond2 = beta_b > kPositivity;
  add(r, "condition_1_or_2", cond1 || cond2, std::max(strict_slack, beta_b), kPositivity,
      std::string("condition 1 (strict coupling): ") + (cond1 ? "holds" : "fails") +
          "; condition 2 (B^*B >= beta Id): " + (cond2 ? "holds" : "fails"));

  add_cstrong(r, p, c, MetricSchedule::prox_friendly(tau, c, p.B()), grid);
  finish(r);
  return r;
}

}  // namespace proxama
