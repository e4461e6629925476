#pragma once

#include <limits>
#include <optional>
#include <string>
#include <variant>

#include "proxama/linop.hpp"

namespace proxama {

/// Values on the extended real line. +infinity is represented by the IEEE
/// infinity constant below and only ever produced explicitly (indicator
/// functions, conjugates of positively homogeneous functions).
using ExtendedReal = double;
inline constexpr ExtendedReal kPlusInfinity = std::numeric_limits<double>::infinity();

/// w/2 * |x - d|^2
struct QuadraticDistance {
  Vector d;
  double weight = 1.0;
};
/// w * |x|_1; weight 0 degenerates to the zero function.
struct L1Norm {
  double weight = 1.0;
};
/// Indicator of the box [lo, hi]; bounds may be infinite.
struct BoxIndicator {
  Vector lo;
  Vector hi;
};
struct ZeroFunction {};
/// 1/2 <x, Q x> + <q, x> with Q symmetric positive semidefinite.
struct QuadraticForm {
  LinearMap Q;
  Vector q;
};

/// A closed convex function on R^dim from a fixed catalog, with its
/// proximal map, gradient (smooth kinds) and conjugate information.
class SeparableFunction {
 public:
  using Kind = std::variant<QuadraticDistance, L1Norm, BoxIndicator, ZeroFunction, QuadraticForm>;

  static SeparableFunction quadratic_distance(Vector d, double weight);
  static SeparableFunction l1(Eigen::Index dim, double weight);
  static SeparableFunction box_indicator(Vector lo, Vector hi);
  static SeparableFunction zero(Eigen::Index dim);
  static SeparableFunction quadratic_form(LinearMap Q, Vector q);

  const Kind& kind() const { return kind_; }
  Eigen::Index dim() const { return dim_; }
  std::string kind_name() const;

  /// Modulus sigma of strong convexity (0 when merely convex).
  double strong_convexity() const { return strong_convexity_; }
  /// Lipschitz constant of the gradient; nullopt for nonsmooth kinds.
  std::optional<double> grad_lipschitz() const { return grad_lipschitz_; }
  bool is_smooth() const { return grad_lipschitz_.has_value(); }
  bool is_zero() const;

  ExtendedReal eval(const Vector& x) const;

  /// argmin_y gamma * f(y) + 1/2 |y - x|^2.
  Vector prox(double gamma, const Vector& x) const;

  /// Exact gradient; CapabilityError for l1 and box kinds.
  Vector grad(const Vector& x) const;

  /// The unique p with s in the subdifferential at p, i.e. the gradient of the
  /// conjugate at s. Closed form for the quadratic kinds; other kinds with
  /// sigma > 0 go through conj_grad_iterative. CapabilityError when sigma = 0.
  Vector conj_grad(const Vector& s) const;

  /// Proximal-point evaluation of the conjugate gradient:
  /// p <- prox(eta, p + eta*s), eta = 1/sigma, until the step is below 1e-12
  /// or 10000 iterations. Exposed so it can be checked against the closed forms.
  Vector conj_grad_iterative(const Vector& s) const;

  /// Fenchel conjugate in closed form (quadratic_distance, l1, zero, box).
  ExtendedReal conj_eval(const Vector& s) const;

 private:
  SeparableFunction(Kind kind, Eigen::Index dim, double sigma, std::optional<double> lipschitz)
      : kind_(std::move(kind)), dim_(dim), strong_convexity_(sigma), grad_lipschitz_(lipschitz) {}

  void check_dim(const char* where, const Vector& x) const;

  Kind kind_;
  Eigen::Index dim_;
  double strong_convexity_;
  std::optional<double> grad_lipschitz_;
};

/// Componentwise soft thresholding by kappa >= 0.
Vector soft_threshold(const Vector& x, double kappa);

}  // namespace proxama
