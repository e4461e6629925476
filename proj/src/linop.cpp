#include "proxama/linop.hpp"

#include <cmath>
#include <random>
#include <variant>

#include "proxama/errors.hpp"

namespace proxama {

namespace {

struct DenseOp {
  Matrix entries;
};
struct IdentityOp {};
struct ScaledIdentityOp {
  double factor;
};
struct SumOp {
  LinearMap left;
  LinearMap right;
};
struct ComposeOp {
  LinearMap outer;
  LinearMap inner;
};
struct AdjointOp {
  LinearMap of;
};

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

struct LinearMap::Node {
  std::variant<DenseOp, IdentityOp, ScaledIdentityOp, SumOp, ComposeOp, AdjointOp> op;
};

LinearMap LinearMap::dense(Matrix entries) {
  if (entries.rows() == 0 || entries.cols() == 0) {
    throw std::invalid_argument("LinearMap::dense: empty matrix");
  }
  const auto rows = entries.rows();
  const auto cols = entries.cols();
  return LinearMap(std::make_shared<const Node>(Node{DenseOp{std::move(entries)}}), cols, rows);
}

LinearMap LinearMap::identity(Eigen::Index n) {
  if (n <= 0) throw std::invalid_argument("LinearMap::identity: dimension must be positive");
  return LinearMap(std::make_shared<const Node>(Node{IdentityOp{}}), n, n);
}

LinearMap LinearMap::scaled_identity(Eigen::Index n, double factor) {
  if (n <= 0) throw std::invalid_argument("LinearMap::scaled_identity: dimension must be positive");
  return LinearMap(std::make_shared<const Node>(Node{ScaledIdentityOp{factor}}), n, n);
}

LinearMap LinearMap::sum(const LinearMap& left, const LinearMap& right) {
  if (left.dim_in() != right.dim_in()) {
    throw DimensionError("LinearMap::sum (input)", static_cast<std::size_t>(left.dim_in()),
                         static_cast<std::size_t>(right.dim_in()));
  }
  if (left.dim_out() != right.dim_out()) {
    throw DimensionError("LinearMap::sum (output)", static_cast<std::size_t>(left.dim_out()),
                         static_cast<std::size_t>(right.dim_out()));
  }
  return LinearMap(std::make_shared<const Node>(Node{SumOp{left, right}}), left.dim_in(),
                   left.dim_out());
}

LinearMap LinearMap::compose(const LinearMap& outer, const LinearMap& inner) {
  if (outer.dim_in() != inner.dim_out()) {
    throw DimensionError("LinearMap::compose", static_cast<std::size_t>(outer.dim_in()),
                         static_cast<std::size_t>(inner.dim_out()));
  }
  return LinearMap(std::make_shared<const Node>(Node{ComposeOp{outer, inner}}), inner.dim_in(),
                   outer.dim_out());
}

LinearMap LinearMap::adjoint(const LinearMap& of) {
  // adjoint(adjoint(M)) is M itself.
  if (const auto* adj = std::get_if<AdjointOp>(&of.node_->op)) return adj->of;
  return LinearMap(std::make_shared<const Node>(Node{AdjointOp{of}}), of.dim_out(), of.dim_in());
}

const Matrix* LinearMap::as_dense() const {
  if (const auto* d = std::get_if<DenseOp>(&node_->op)) return &d->entries;
  return nullptr;
}

Vector LinearMap::apply(const Vector& x) const {
  if (x.size() != dim_in_) {
    throw DimensionError("LinearMap::apply", static_cast<std::size_t>(dim_in_),
                         static_cast<std::size_t>(x.size()));
  }
  return apply_unchecked(x);
}

Vector LinearMap::adjoint_apply(const Vector& y) const {
  if (y.size() != dim_out_) {
    throw DimensionError("LinearMap::adjoint_apply", static_cast<std::size_t>(dim_out_),
                         static_cast<std::size_t>(y.size()));
  }
  return adjoint_apply_unchecked(y);
}

Vector LinearMap::apply_unchecked(const Vector& x) const {
  return std::visit(
      Overloaded{
          [&](const DenseOp& d) -> Vector { return d.entries * x; },
          [&](const IdentityOp&) -> Vector { return x; },
          [&](const ScaledIdentityOp& s) -> Vector { return s.factor * x; },
          [&](const SumOp& s) -> Vector {
            return s.left.apply_unchecked(x) + s.right.apply_unchecked(x);
          },
          [&](const ComposeOp& c) -> Vector {
            return c.outer.apply_unchecked(c.inner.apply_unchecked(x));
          },
          [&](const AdjointOp& a) -> Vector { return a.of.adjoint_apply_unchecked(x); },
      },
      node_->op);
}

Vector LinearMap::adjoint_apply_unchecked(const Vector& y) const {
  return std::visit(
      Overloaded{
          [&](const DenseOp& d) -> Vector { return d.entries.transpose() * y; },
          [&](const IdentityOp&) -> Vector { return y; },
          [&](const ScaledIdentityOp& s) -> Vector { return s.factor * y; },
          [&](const SumOp& s) -> Vector {
            return s.left.adjoint_apply_unchecked(y) + s.right.adjoint_apply_unchecked(y);
          },
          [&](const ComposeOp& c) -> Vector {
            return c.inner.adjoint_apply_unchecked(c.outer.adjoint_apply_unchecked(y));
          },
          [&](const AdjointOp& a) -> Vector { return a.of.apply_unchecked(y); },
      },
      node_->op);
}

Matrix LinearMap::to_dense() const {
  return std::visit(
      Overloaded{
          [&](const DenseOp& d) -> Matrix { return d.entries; },
          [&](const IdentityOp&) -> Matrix { return Matrix::Identity(dim_out_, dim_in_); },
          [&](const ScaledIdentityOp& s) -> Matrix {
            return s.factor * Matrix::Identity(dim_out_, dim_in_);
          },
          [&](const SumOp& s) -> Matrix { return s.left.to_dense() + s.right.to_dense(); },
          [&](const ComposeOp& c) -> Matrix { return c.outer.to_dense() * c.inner.to_dense(); },
          [&](const AdjointOp& a) -> Matrix { return a.of.to_dense().transpose(); },
      },
      node_->op);
}

std::optional<double> LinearMap::as_scaled_identity() const {
  return std::visit(Overloaded{
                        [](const IdentityOp&) -> std::optional<double> { return 1.0; },
                        [](const ScaledIdentityOp& s) -> std::optional<double> { return s.factor; },
                        [](const AdjointOp& a) { return a.of.as_scaled_identity(); },
                        [](const auto&) -> std::optional<double> { return std::nullopt; },
                    },
                    node_->op);
}

LinearMap scaled(double s, const LinearMap& map) {
  return LinearMap::compose(LinearMap::scaled_identity(map.dim_out(), s), map);
}

LinearMap difference(const LinearMap& a, const LinearMap& b) {
  return LinearMap::sum(a, scaled(-1.0, b));
}

LinearMap gram(const LinearMap& map) { return LinearMap::compose(LinearMap::adjoint(map), map); }

double operator_norm(const LinearMap& map, double tol, int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("operator_norm: tol must be positive");

  const auto n = map.dim_in();
  auto normal_op = [&](const Vector& v) { return map.adjoint_apply(map.apply(v)); };

  Vector v = Vector::Ones(n) / std::sqrt(static_cast<double>(n));
  Vector w = normal_op(v);
  if (w.norm() == 0.0) {
    std::minstd_rand gen(20190101u);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = unif(gen);
    v.normalize();
    w = normal_op(v);
    if (w.norm() == 0.0) return 0.0;
  }

  double lambda = v.dot(w);
  for (int it = 1; it <= max_iter; ++it) {
    const double wn = w.norm();
    if (wn == 0.0) return 0.0;
    v = w / wn;
    w = normal_op(v);
    const double next = v.dot(w);
    if (std::abs(next - lambda) <= tol * std::abs(next)) return std::sqrt(std::max(next, 0.0));
    lambda = next;
  }
  throw ConvergenceError("operator_norm: power iteration did not converge",
                         std::sqrt(std::max(lambda, 0.0)), max_iter);
}

double min_eigenvalue_sym(const LinearMap& map) {
  if (!map.is_square()) {
    throw DimensionError("min_eigenvalue_sym (square)", static_cast<std::size_t>(map.dim_in()),
                         static_cast<std::size_t>(map.dim_out()));
  }
  const Matrix m = map.to_dense();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (asym > 1e-10 * scale) throw AsymmetryError(asym);
  const Matrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double squared_seminorm(const LinearMap& metric, const Vector& x) { return x.dot(metric.apply(x)); }

}  // namespace proxama
