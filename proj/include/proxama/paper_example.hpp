#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "proxama/problem.hpp"
#include "proxama/problem_file.hpp"
#include "proxama/schedules.hpp"

namespace proxama::example {

// min 1/2|x - d|^2 + |z|_1  s.t.  Ax + Bz = 0 on R^2 x R^2, with
// A = [[2, 1], [-2, 1]]/sqrt(8), B = [[-3, 0], [4, 0]]/5, d = (1, 0).
// Unique primal solution x* = z* = 0; |A| = |B| = 1, sigma = 1.

TwoBlockProblem problem();

/// x0 = z0 = y0 = (-10, 10).
PrimalDualState start();

enum class CChoice { c025, c199, c1_decay, c2_decay };
enum class TauCChoice { tc025, tc099 };

/// c = 0.25, c = 1.99, c1(t) = 1/(t^2 + 1.1) + 0.01, c2(t) = 1/sqrt(t + 1.1) + 0.01.
ScalarSchedule c_schedule(CChoice c);
/// tau(t) = a / c(t) with a = tau(t)c(t) in {0.25, 0.99}.
ScalarSchedule tau_schedule(CChoice c, TauCChoice tc);
double tau_c_product(TauCChoice tc);

/// M1 = 0, M2 = (1/tau) Id - c B^*B.
Schedules schedules(CChoice c, TauCChoice tc);

std::optional<CChoice> parse_c(std::string_view name);
std::optional<TauCChoice> parse_tau_c(std::string_view name);
std::string name_of(CChoice c);
std::string name_of(TauCChoice tc);

struct Variant {
  CChoice c;
  TauCChoice tc;
};
std::vector<Variant> all_variants();

/// Continuous-time horizon after which every variant has settled at the
/// saddle point under rk4 with step 0.01.
double default_horizon(CChoice c);

/// The variant as a problem file (start point, rk4 horizon and step included).
ProblemFile file(CChoice c, TauCChoice tc);

}  // namespace proxama::example
