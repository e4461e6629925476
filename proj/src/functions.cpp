#include "proxama/functions.hpp"

#include <cmath>

#include "proxama/errors.hpp"

namespace proxama {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

// Conjugates that are indicators accept points this close to the boundary.
constexpr double kConjugateSlack = 1e-12;

}  // namespace

Vector soft_threshold(const Vector& x, double kappa) {
  return x.unaryExpr([kappa](double v) {
    if (v > kappa) return v - kappa;
    if (v < -kappa) return v + kappa;
    return 0.0;
  });
}

SeparableFunction SeparableFunction::quadratic_distance(Vector d, double weight) {
  if (!(weight > 0.0)) throw ProblemError("quadratic_distance: weight must be positive");
  if (d.size() == 0) throw ProblemError("quadratic_distance: empty center");
  const auto n = d.size();
  return SeparableFunction(QuadraticDistance{std::move(d), weight}, n, weight, weight);
}

SeparableFunction SeparableFunction::l1(Eigen::Index dim, double weight) {
  if (dim <= 0) throw ProblemError("l1: dimension must be positive");
  if (!(weight >= 0.0)) throw ProblemError("l1: weight must be nonnegative");
  return SeparableFunction(L1Norm{weight}, dim, 0.0, std::nullopt);
}

SeparableFunction SeparableFunction::box_indicator(Vector lo, Vector hi) {
  if (lo.size() != hi.size()) {
    throw DimensionError("box_indicator", static_cast<std::size_t>(lo.size()),
                         static_cast<std::size_t>(hi.size()));
  }
  if (lo.size() == 0) throw ProblemError("box_indicator: empty box");
  if ((lo.array() > hi.array()).any()) throw ProblemError("box_indicator: lo > hi");
  const auto n = lo.size();
  return SeparableFunction(BoxIndicator{std::move(lo), std::move(hi)}, n, 0.0, std::nullopt);
}

SeparableFunction SeparableFunction::zero(Eigen::Index dim) {
  if (dim <= 0) throw ProblemError("zero: dimension must be positive");
  return SeparableFunction(ZeroFunction{}, dim, 0.0, 0.0);
}

SeparableFunction SeparableFunction::quadratic_form(LinearMap Q, Vector q) {
  if (!Q.is_square()) throw ProblemError("quadratic_form: Q must be square");
  if (Q.dim_in() != q.size()) {
    throw DimensionError("quadratic_form", static_cast<std::size_t>(Q.dim_in()),
                         static_cast<std::size_t>(q.size()));
  }
  const double lambda_min = min_eigenvalue_sym(Q);
  if (lambda_min < -1e-10) throw ProblemError("quadratic_form: Q is not positive semidefinite");
  const double sigma = std::max(lambda_min, 0.0);
  const double lipschitz = operator_norm(Q);
  const auto n = q.size();
  return SeparableFunction(QuadraticForm{std::move(Q), std::move(q)}, n, sigma, lipschitz);
}

std::string SeparableFunction::kind_name() const {
  return std::visit(Overloaded{
                        [](const QuadraticDistance&) { return std::string("quadratic_distance"); },
                        [](const L1Norm&) { return std::string("l1"); },
                        [](const BoxIndicator&) { return std::string("box_indicator"); },
                        [](const ZeroFunction&) { return std::string("zero"); },
                        [](const QuadraticForm&) { return std::string("quadratic_form"); },
                    },
                    kind_);
}

bool SeparableFunction::is_zero() const {
  if (std::holds_alternative<ZeroFunction>(kind_)) return true;
  if (const auto* l1 = std::get_if<L1Norm>(&kind_)) return l1->weight == 0.0;
  return false;
}

void SeparableFunction::check_dim(const char* where, const Vector& x) const {
  if (x.size() != dim_) {
    throw DimensionError(where, static_cast<std::size_t>(dim_), static_cast<std::size_t>(x.size()));
  }
}

ExtendedReal SeparableFunction::eval(const Vector& x) const {
  check_dim("SeparableFunction::eval", x);
  return std::visit(
      Overloaded{
          [&](const QuadraticDistance& k) { return 0.5 * k.weight * (x - k.d).squaredNorm(); },
          [&](const L1Norm& k) { return k.weight * x.lpNorm<1>(); },
          [&](const BoxIndicator& k) {
            const bool inside = (x.array() >= k.lo.array()).all() && (x.array() <= k.hi.array()).all();
            return inside ? 0.0 : kPlusInfinity;
          },
          [&](const ZeroFunction&) { return 0.0; },
          [&](const QuadraticForm& k) { return 0.5 * x.dot(k.Q.apply(x)) + k.q.dot(x); },
      },
      kind_);
}

Vector SeparableFunction::prox(double gamma, const Vector& x) const {
  if (!(gamma > 0.0)) throw std::invalid_argument("prox: gamma must be positive");
  check_dim("SeparableFunction::prox", x);
  return std::visit(
      Overloaded{
          [&](const QuadraticDistance& k) -> Vector {
            const double gw = gamma * k.weight;
            return (x + gw * k.d) / (1.0 + gw);
          },
          [&](const L1Norm& k) -> Vector { return soft_threshold(x, gamma * k.weight); },
          [&](const BoxIndicator& k) -> Vector { return x.cwiseMax(k.lo).cwiseMin(k.hi); },
          [&](const ZeroFunction&) -> Vector { return x; },
          [&](const QuadraticForm& k) -> Vector {
            const Matrix system = Matrix::Identity(dim_, dim_) + gamma * k.Q.to_dense();
            return system.ldlt().solve(x - gamma * k.q);
          },
      },
      kind_);
}

Vector SeparableFunction::grad(const Vector& x) const {
  check_dim("SeparableFunction::grad", x);
  return std::visit(
      Overloaded{
          [&](const QuadraticDistance& k) -> Vector { return k.weight * (x - k.d); },
          [&](const ZeroFunction&) -> Vector { return Vector::Zero(dim_); },
          [&](const QuadraticForm& k) -> Vector { return k.Q.apply(x) + k.q; },
          [&](const auto&) -> Vector {
            throw CapabilityError("grad: " + kind_name() + " is not differentiable");
          },
      },
      kind_);
}

Vector SeparableFunction::conj_grad(const Vector& s) const {
  check_dim("SeparableFunction::conj_grad", s);
  if (!(strong_convexity_ > 0.0)) {
    throw CapabilityError("conj_grad: " + kind_name() +
                          " is not strongly convex, the conjugate gradient is not single-valued");
  }
  return std::visit(Overloaded{
                        [&](const QuadraticDistance& k) -> Vector { return k.d + s / k.weight; },
                        [&](const QuadraticForm& k) -> Vector {
                          return k.Q.to_dense().ldlt().solve(s - k.q);
                        },
                        [&](const auto&) -> Vector { return conj_grad_iterative(s); },
                    },
                    kind_);
}

Vector SeparableFunction::conj_grad_iterative(const Vector& s) const {
  check_dim("SeparableFunction::conj_grad_iterative", s);
  if (!(strong_convexity_ > 0.0)) {
    throw CapabilityError("conj_grad_iterative: " + kind_name() + " is not strongly convex");
  }
  constexpr int kMaxIter = 10000;
  const double eta = 1.0 / strong_convexity_;
  Vector p = Vector::Zero(dim_);
  double step = 0.0;
  for (int it = 0; it < kMaxIter; ++it) {
    Vector next = prox(eta, p + eta * s);
    step = (next - p).norm();
    p = std::move(next);
    if (step < 1e-12) return p;
  }
  throw ConvergenceError("conj_grad_iterative: no convergence", step, kMaxIter);
}

ExtendedReal SeparableFunction::conj_eval(const Vector& s) const {
  check_dim("SeparableFunction::conj_eval", s);
  return std::visit(
      Overloaded{
          [&](const QuadraticDistance& k) -> ExtendedReal {
            return s.squaredNorm() / (2.0 * k.weight) + s.dot(k.d);
          },
          [&](const L1Norm& k) -> ExtendedReal {
            const double bound = k.weight * (1.0 + kConjugateSlack) + kConjugateSlack;
            return s.lpNorm<Eigen::Infinity>() <= bound ? 0.0 : kPlusInfinity;
          },
          [&](const ZeroFunction&) -> ExtendedReal {
            return s.lpNorm<Eigen::Infinity>() <= kConjugateSlack ? 0.0 : kPlusInfinity;
          },
          [&](const BoxIndicator& k) -> ExtendedReal {
            // Support function of the box.
            double total = 0.0;
            for (Eigen::Index i = 0; i < s.size(); ++i) {
              if (s[i] > 0.0) {
                if (std::isinf(k.hi[i])) return kPlusInfinity;
                total += s[i] * k.hi[i];
              } else if (s[i] < 0.0) {
                if (std::isinf(k.lo[i])) return kPlusInfinity;
                total += s[i] * k.lo[i];
              }
            }
            return total;
          },
          [&](const QuadraticForm&) -> ExtendedReal {
            throw CapabilityError("conj_eval: no closed-form conjugate for quadratic_form");
          },
      },
      kind_);
}

}  // namespace proxama
