#pragma once

#include <functional>
#include <span>
#include <vector>

#include "proxama/linop.hpp"

namespace proxama {

/// Every data-parallel loop in the library comes in two flavours: the serial
/// reference and an OpenMP version that must produce bit-identical output.
enum class Execution { serial, parallel };

/// lambda_min(at(t)) for each t of the grid.
std::vector<double> min_eigenvalues_on_grid(const std::function<LinearMap(double)>& at,
                                            std::span<const double> grid,
                                            Execution exec = Execution::parallel);

/// |at(t)| (operator norm) for each t of the grid.
std::vector<double> operator_norms_on_grid(const std::function<LinearMap(double)>& at,
                                           std::span<const double> grid,
                                           Execution exec = Execution::parallel);

/// Runs body(i) for i in [0, n). Exceptions thrown inside the parallel region
/// are captured and the one with the lowest index is rethrown afterwards.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body, Execution exec);

}  // namespace proxama
