#pragma once

// Independent reference computations for the tests. Nothing here calls the
// library's own solvers: these are the oracles the library is checked against.

#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Dense>

#include "proxama/linop.hpp"
#include "proxama/problem.hpp"

namespace proxama::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(0x5eed1234ULL);
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline Vector random_vector(Eigen::Index n, double scale = 1.0) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = uniform(-scale, scale);
  return v;
}

inline Matrix random_matrix(Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = uniform(-1.0, 1.0);
  return m;
}

inline Matrix random_spd(Eigen::Index n, double shift) {
  const Matrix r = random_matrix(n, n);
  return r * r.transpose() + shift * Matrix::Identity(n, n);
}

inline double max_abs_diff(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

/// Minimizes phi over [-20, 20]^n (n <= 2) by a coarse grid followed by
/// compass search with shrinking steps. Infinite values are allowed.
inline Vector brute_force_argmin(const std::function<double(const Vector&)>& phi, Eigen::Index n) {
  const double lo = -20.0, hi = 20.0;
  const int cells = 400;
  const double h = (hi - lo) / cells;
  Vector best = Vector::Zero(n);
  double best_val = phi(best);
  Vector p(n);
  if (n == 1) {
    for (int i = 0; i <= cells; ++i) {
      p(0) = lo + i * h;
      const double v = phi(p);
      if (v < best_val) best_val = v, best = p;
    }
  } else {
    for (int i = 0; i <= cells; ++i) {
      for (int j = 0; j <= cells; ++j) {
        p << lo + i * h, lo + j * h;
        const double v = phi(p);
        if (v < best_val) best_val = v, best = p;
      }
    }
  }
  double step = h;
  while (step > 1e-9) {
    bool moved = false;
    for (Eigen::Index k = 0; k < n; ++k) {
      for (double sgn : {-1.0, 1.0}) {
        Vector q = best;
        q(k) += sgn * step;
        const double v = phi(q);
        if (v < best_val) best_val = v, best = q, moved = true;
      }
    }
    if (!moved) step *= 0.5;
  }
  return best;
}

/// Solves the optimality system of
///   min w/2 |x - d|^2 + 1/2 <z, Q z> + <q, z>  s.t.  Ax + Bz = b
/// as one dense linear system in (x, z, y), with the sign convention
/// L = f + g + <y, b - Ax - Bz>.
struct DenseKkt {
  Vector x, z, y;
};

inline DenseKkt dense_kkt_solve(double w, const Vector& d, const Matrix& Q, const Vector& q, const Matrix& A,
                                const Matrix& B, const Vector& b) {
  const Eigen::Index nx = A.cols(), nz = B.cols(), ny = A.rows();
  const Eigen::Index n = nx + nz + ny;
  Matrix K = Matrix::Zero(n, n);
  Vector rhs = Vector::Zero(n);
  K.block(0, 0, nx, nx) = w * Matrix::Identity(nx, nx);
  K.block(0, nx + nz, nx, ny) = -A.transpose();
  rhs.head(nx) = w * d;
  K.block(nx, nx, nz, nz) = Q;
  K.block(nx, nx + nz, nz, ny) = -B.transpose();
  rhs.segment(nx, nz) = -q;
  K.block(nx + nz, 0, ny, nx) = A;
  K.block(nx + nz, nx, ny, nz) = B;
  rhs.tail(ny) = b;
  const Vector sol = K.fullPivLu().solve(rhs);
  return {sol.head(nx), sol.segment(nx, nz), sol.tail(ny)};
}

/// The Example's saddle point, from the optimality conditions by hand:
/// x* = z* = 0, A^*y* = x* - d = (-1, 0) gives y* = (-1, 1)/sqrt(2), and
/// B^*y* = (7/(5 sqrt 2), 0) lies in the unit box, so 0 is in dg(z*) - B^*y*.
inline PrimalDualState example_saddle() {
  const double r = 1.0 / std::sqrt(2.0);
  return PrimalDualState{Vector::Zero(2), Vector::Zero(2), (Vector(2) << -r, r).finished(), 0.0};
}

}  // namespace proxama::testing
