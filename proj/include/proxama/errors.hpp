#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace proxama {

/// Operand length does not match the operator or function it is fed to.
class DimensionError : public std::invalid_argument {
 public:
  DimensionError(const std::string& where, std::size_t expected, std::size_t actual)
      : std::invalid_argument(where + ": expected dimension " + std::to_string(expected) +
                              ", got " + std::to_string(actual)),
        expected_(expected),
        actual_(actual) {}

  std::size_t expected() const { return expected_; }
  std::size_t actual() const { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

/// The requested operation is not available for this kind of object
/// (gradient of a nonsmooth function, conjugate without closed form, ...).
class CapabilityError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An iterative routine stopped before reaching its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_estimate, int iterations)
      : std::runtime_error(what), best_estimate_(best_estimate), iterations_(iterations) {}

  double best_estimate() const { return best_estimate_; }
  int iterations() const { return iterations_; }

 private:
  double best_estimate_;
  int iterations_;
};

class AsymmetryError : public std::invalid_argument {
 public:
  explicit AsymmetryError(double max_asymmetry)
      : std::invalid_argument("operator is not symmetric (max |M - M^T| = " +
                              std::to_string(max_asymmetry) + ")"),
        max_asymmetry_(max_asymmetry) {}

  double max_asymmetry() const { return max_asymmetry_; }

 private:
  double max_asymmetry_;
};

/// Problem data violating a structural assumption (sigma > 0, A != 0, ...).
class ProblemError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace proxama
