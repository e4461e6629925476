#pragma once

#include <memory>
#include <optional>

#include <Eigen/Dense>

namespace proxama {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Immutable finite-dimensional linear operator with an exact adjoint.
///
/// Sums, compositions and adjoints are kept as an expression tree and
/// evaluated lazily; only to_dense() materializes a matrix. Copies share
/// the tree, so passing a LinearMap by value is cheap and thread-safe.
class LinearMap {
 public:
  static LinearMap dense(Matrix entries);
  static LinearMap identity(Eigen::Index n);
  static LinearMap scaled_identity(Eigen::Index n, double factor);
  static LinearMap zero(Eigen::Index n) { return scaled_identity(n, 0.0); }
  static LinearMap sum(const LinearMap& left, const LinearMap& right);
  static LinearMap compose(const LinearMap& outer, const LinearMap& inner);
  static LinearMap adjoint(const LinearMap& of);

  Eigen::Index dim_in() const { return dim_in_; }
  Eigen::Index dim_out() const { return dim_out_; }
  bool is_square() const { return dim_in_ == dim_out_; }
  /// Entries when the map is a plain dense matrix, otherwise nullptr.
  const Matrix* as_dense() const;

  Vector apply(const Vector& x) const;
  Vector adjoint_apply(const Vector& y) const;
  Matrix to_dense() const;

  /// Factor s when the map is structurally s*Id (identity, scaled identity,
  /// or the adjoint of one). Sums and compositions are not inspected.
  std::optional<double> as_scaled_identity() const;

 private:
  struct Node;
  LinearMap(std::shared_ptr<const Node> node, Eigen::Index dim_in, Eigen::Index dim_out)
      : node_(std::move(node)), dim_in_(dim_in), dim_out_(dim_out) {}

  Vector apply_unchecked(const Vector& x) const;
  Vector adjoint_apply_unchecked(const Vector& y) const;

  std::shared_ptr<const Node> node_;
  Eigen::Index dim_in_ = 0;
  Eigen::Index dim_out_ = 0;
};

inline LinearMap operator+(const LinearMap& a, const LinearMap& b) { return LinearMap::sum(a, b); }
inline LinearMap operator*(const LinearMap& a, const LinearMap& b) { return LinearMap::compose(a, b); }

/// s * M, as a composition with a scaled identity.
LinearMap scaled(double s, const LinearMap& map);
/// M - N.
LinearMap difference(const LinearMap& a, const LinearMap& b);
/// M^* M.
LinearMap gram(const LinearMap& map);

/// Largest singular value by power iteration on M^*M. Starts from the
/// normalized all-ones vector and falls back to a fixed pseudo-random probe
/// when that start is annihilated. Throws ConvergenceError (carrying the best
/// estimate) if the relative change does not drop below tol in max_iter steps.
double operator_norm(const LinearMap& map, double tol = 1e-13, int max_iter = 100000);

/// Smallest eigenvalue of a symmetric map via dense eigendecomposition.
/// Throws AsymmetryError if max |M - M^T| exceeds 1e-10 (scaled by max(1, |M|_max)).
double min_eigenvalue_sym(const LinearMap& map);

/// Squared seminorm <x, M x>.
double squared_seminorm(const LinearMap& metric, const Vector& x);

}  // namespace proxama
