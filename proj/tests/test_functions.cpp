#include <doctest.h>

#include "proxama/errors.hpp"
#include "proxama/functions.hpp"
#include "support.hpp"

using namespace proxama;
using namespace proxama::testing;

namespace {

Vector v2(double a, double b) { return (Vector(2) << a, b).finished(); }

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

}  // namespace

TEST_CASE("eval") {
  const auto qd = SeparableFunction::quadratic_distance(v2(1, 0), 1.0);
  CHECK(qd.eval(v2(0, 0)) == doctest::Approx(0.5));
  CHECK(SeparableFunction::l1(2, 1.0).eval(v2(-10, 10)) == doctest::Approx(20.0));
  const auto box = SeparableFunction::box_indicator(v2(-1, -1), v2(1, 1));
  CHECK(box.eval(v2(2, 0)) == kPlusInfinity);
  CHECK(box.eval(v2(1, -1)) == 0.0);
  CHECK_THROWS_AS(qd.eval(Vector::Zero(3)), DimensionError);
}

TEST_CASE("prox examples") {
  const Vector p = SeparableFunction::l1(2, 1.0).prox(0.5, v2(1.2, -0.3));
  CHECK(p(0) == doctest::Approx(0.7));
  CHECK(p(1) == 0.0);

  const auto qd = SeparableFunction::quadratic_distance(v2(1, 0), 1.0);
  for (double g : {0.1, 1.0, 7.0}) CHECK(max_abs_diff(qd.prox(g, v2(1, 0)), v2(1, 0)) < 1e-15);

  CHECK_THROWS_AS(qd.prox(0.0, v2(0, 0)), std::invalid_argument);
  CHECK_THROWS_AS(qd.prox(-1.0, v2(0, 0)), std::invalid_argument);
}

TEST_CASE("l1 prox equals x - tau proj_[-1,1](x / tau)") {
  const auto l1 = SeparableFunction::l1(2, 1.0);
  for (int k = 0; k < 200; ++k) {
    const double tau = uniform(0.05, 5.0);
    const Vector x = random_vector(2, 5.0);
    const Vector proj = (x / tau).cwiseMax(-1.0).cwiseMin(1.0);
    CHECK(max_abs_diff(l1.prox(tau, x), x - tau * proj) <= 1e-12);
  }
}

TEST_CASE("property: prox matches brute-force minimization") {
  for (int kind = 0; kind < 5; ++kind) {
    for (int k = 0; k < 50; ++k) {
      const Eigen::Index n = 1 + (k % 2);
      const SeparableFunction fn = random_instance(kind, n);
      const double gamma = uniform(0.1, 3.0);
      const Vector x = random_vector(n, 5.0);
      const Vector oracle = brute_force_argmin(
          [&](const Vector& y) { return gamma * fn.eval(y) + 0.5 * (y - x).squaredNorm(); }, n);
      INFO("kind " << fn.kind_name() << " instance " << k);
      CHECK(max_abs_diff(fn.prox(gamma, x), oracle) <= 1e-4);
    }
  }
}

TEST_CASE("property: prox is firmly nonexpansive") {
  for (int kind = 0; kind < 5; ++kind) {
    for (int k = 0; k < 50; ++k) {
      const SeparableFunction fn = random_instance(kind, 3);
      const double gamma = uniform(0.1, 3.0);
      const Vector x = random_vector(3, 5.0), y = random_vector(3, 5.0);
      const Vector px = fn.prox(gamma, x), py = fn.prox(gamma, y);
      CHECK((px - py).squaredNorm() <= (px - py).dot(x - y) + 1e-12);
      CHECK((px - py).norm() <= (x - y).norm() + 1e-12);
    }
  }
}

TEST_CASE("property: Moreau identity for the l1 / box pair") {
  for (int k = 0; k < 100; ++k) {
    const double w = uniform(0.1, 3.0);
    const double gamma = uniform(0.1, 4.0);
    const Vector x = random_vector(3, 6.0);
    const auto l1 = SeparableFunction::l1(3, w);
    const auto box = SeparableFunction::box_indicator(Vector::Constant(3, -w), Vector::Constant(3, w));
    // (w|.|_1)^* is the indicator of [-w, w]^n and vice versa.
    CHECK(max_abs_diff(l1.prox(gamma, x) + gamma * box.prox(1.0 / gamma, x / gamma), x) <= 1e-10);
    CHECK(max_abs_diff(box.prox(gamma, x) + gamma * l1.prox(1.0 / gamma, x / gamma), x) <= 1e-10);
  }
}

TEST_CASE("grad") {
  CHECK(SeparableFunction::zero(2).grad(v2(3, 4)) == Vector::Zero(2));
  const auto qd = SeparableFunction::quadratic_distance(v2(1, 0), 1.0);
  CHECK(max_abs_diff(qd.grad(v2(0, 0)), v2(-1, 0)) == 0.0);
  const auto qf = SeparableFunction::quadratic_form(LinearMap::identity(2), v2(1, 1));
  CHECK(max_abs_diff(qf.grad(v2(2, 0)), v2(3, 1)) < 1e-15);
  CHECK_THROWS_AS(SeparableFunction::l1(2, 1.0).grad(v2(0, 0)), CapabilityError);
  CHECK_THROWS_AS(SeparableFunction::box_indicator(v2(-1, -1), v2(1, 1)).grad(v2(0, 0)), CapabilityError);
}

TEST_CASE("conj_grad") {
  const auto qd = SeparableFunction::quadratic_distance(v2(1, 0), 1.0);
  CHECK(max_abs_diff(qd.conj_grad(v2(0, 0)), v2(1, 0)) == 0.0);
  const auto qd2 = SeparableFunction::quadratic_distance(v2(0, 0), 2.0);
  CHECK(max_abs_diff(qd2.conj_grad(v2(4, -2)), v2(2, -1)) < 1e-15);
  const auto qf = SeparableFunction::quadratic_form(LinearMap::scaled_identity(2, 2.0), v2(0, 0));
  CHECK(max_abs_diff(qf.conj_grad(v2(1, 1)), v2(0.5, 0.5)) < 1e-14);
  CHECK_THROWS_AS(SeparableFunction::l1(2, 1.0).conj_grad(v2(0, 0)), CapabilityError);
  CHECK_THROWS_AS(SeparableFunction::zero(2).conj_grad(v2(0, 0)), CapabilityError);
}

TEST_CASE("property: iterative conjugate gradient agrees with the closed forms") {
  for (int k = 0; k < 30; ++k) {
    const auto qd = SeparableFunction::quadratic_distance(random_vector(2, 3.0), uniform(0.5, 3.0));
    const auto qf =
        SeparableFunction::quadratic_form(LinearMap::dense(random_spd(2, 1.0)), random_vector(2, 1.0));
    for (const auto* fn : {&qd, &qf}) {
      const Vector s = random_vector(2, 4.0);
      CHECK(max_abs_diff(fn->conj_grad_iterative(s), fn->conj_grad(s)) <= 1e-8);
    }
  }
}

TEST_CASE("property: conj_grad returns p with s in df(p)") {
  for (int k = 0; k < 50; ++k) {
    const auto qd = SeparableFunction::quadratic_distance(random_vector(3, 3.0), uniform(0.2, 3.0));
    const Vector s = random_vector(3, 4.0);
    const Vector p = qd.conj_grad(s);
    // Fenchel-Young holds with equality exactly on the graph of df.
    CHECK(qd.eval(p) + qd.conj_eval(s) - s.dot(p) <= 1e-9);
    const auto qf =
        SeparableFunction::quadratic_form(LinearMap::dense(random_spd(3, 0.3)), random_vector(3, 1.0));
    CHECK(max_abs_diff(qf.grad(qf.conj_grad(s)), s) <= 1e-9);
  }
}

TEST_CASE("conj_eval") {
  const auto l1 = SeparableFunction::l1(2, 1.0);
  CHECK(l1.conj_eval(v2(0.99, 0)) == 0.0);
  CHECK(l1.conj_eval(v2(1.01, 0)) == kPlusInfinity);
  const auto qd = SeparableFunction::quadratic_distance(v2(1, 0), 1.0);
  CHECK(qd.conj_eval(v2(-1, 0)) == doctest::Approx(-0.5));
  CHECK(SeparableFunction::zero(2).conj_eval(v2(0, 0)) == 0.0);
  CHECK(SeparableFunction::zero(2).conj_eval(v2(0.1, 0)) == kPlusInfinity);
  const auto box = SeparableFunction::box_indicator(v2(-1, 0), v2(2, 3));
  CHECK(box.conj_eval(v2(1, -1)) == doctest::Approx(2.0));
  CHECK_THROWS_AS(SeparableFunction::quadratic_form(LinearMap::identity(2), v2(0, 0)).conj_eval(v2(0, 0)),
                  CapabilityError);
}

TEST_CASE("property: strong monotonicity of the gradient") {
  for (int k = 0; k < 50; ++k) {
    const auto qd = SeparableFunction::quadratic_distance(random_vector(2, 2.0), uniform(0.2, 3.0));
    const auto qf =
        SeparableFunction::quadratic_form(LinearMap::dense(random_spd(2, 0.4)), random_vector(2, 1.0));
    for (const auto* fn : {&qd, &qf}) {
      const Vector x = random_vector(2, 5.0), y = random_vector(2, 5.0);
      const double lhs = (fn->grad(x) - fn->grad(y)).dot(x - y);
      CHECK(lhs >= fn->strong_convexity() * (x - y).squaredNorm() - 1e-10);
    }
  }
}

TEST_CASE("moduli of the catalog") {
  const auto qd = SeparableFunction::quadratic_distance(v2(1, 0), 2.5);
  CHECK(qd.strong_convexity() == 2.5);
  CHECK(qd.grad_lipschitz() == 2.5);
  CHECK(SeparableFunction::l1(2, 1.0).strong_convexity() == 0.0);
  CHECK_FALSE(SeparableFunction::l1(2, 1.0).grad_lipschitz().has_value());
  CHECK_FALSE(SeparableFunction::box_indicator(v2(0, 0), v2(1, 1)).is_smooth());
  CHECK(SeparableFunction::zero(2).grad_lipschitz() == 0.0);
  Matrix q(2, 2);
  q << 2, 1, 1, 2;
  const auto qf = SeparableFunction::quadratic_form(LinearMap::dense(q), v2(0, 0));
  CHECK(qf.strong_convexity() == doctest::Approx(1.0));
  CHECK(*qf.grad_lipschitz() == doctest::Approx(3.0));
  CHECK(SeparableFunction::l1(2, 0.0).is_zero());
  CHECK(SeparableFunction::l1(2, 0.0).eval(v2(3, 4)) == 0.0);
  Matrix indefinite(2, 2);
  indefinite << 1, 0, 0, -1;
  CHECK_THROWS(SeparableFunction::quadratic_form(LinearMap::dense(indefinite), v2(0, 0)));
  CHECK_THROWS(SeparableFunction::quadratic_distance(v2(0, 0), 0.0));
  CHECK_THROWS(SeparableFunction::l1(2, -1.0));
  CHECK_THROWS(SeparableFunction::box_indicator(v2(1, 0), v2(0, 1)));
}
