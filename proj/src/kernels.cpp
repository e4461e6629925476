#include "proxama/kernels.hpp"

#include <exception>

namespace proxama {

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body, Execution exec) {
  if (exec == Execution::serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }

  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<double> min_eigenvalues_on_grid(const std::function<LinearMap(double)>& at,
                                            std::span<const double> grid, Execution exec) {
  std::vector<double> out(grid.size());
  for_each_index(grid.size(), [&](std::size_t i) { out[i] = min_eigenvalue_sym(at(grid[i])); }, exec);
  return out;
}

std::vector<double> operator_norms_on_grid(const std::function<LinearMap(double)>& at,
                                           std::span<const double> grid, Execution exec) {
  std::vector<double> out(grid.size());
  for_each_index(grid.size(), [&](std::size_t i) { out[i] = operator_norm(at(grid[i])); }, exec);
  return out;
}

}  // namespace proxama
