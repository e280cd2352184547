#pragma once

#include <optional>
#include <span>
#include <vector>

#include "gtce/linear_model.hpp"

namespace gtce {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

const char* to_string(LpStatus status);

struct LpOptions {
  double primal_tol = 1e-7;
  double dual_tol = 1e-7;
  double pivot_tol = 1e-9;
  bool equilibrate = true;
  int max_iterations = 0;      // 0: automatic, proportional to model size
  int refactor_interval = 64;  // eta-file length before a fresh LU
  int degenerate_before_bland = 50;
};

/// Result of an LP solve. `duals[i]` is the sensitivity of the optimal
/// objective to row i's right-hand side; for a load-coverage equality this
/// is the marginal price. Reduced costs are c_j - y·A_j.
struct LpResult {
  LpStatus status = LpStatus::infeasible;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  std::optional<std::size_t> certificate_row;  // infeasible: a row that cannot be satisfied
  std::optional<std::size_t> certificate_col;  // unbounded: entering column of the ray
  int iterations = 0;
};

/// Bounded primal revised simplex (two-phase) with Dantzig pricing and a
/// Bland fallback on degenerate streaks. Integrality is ignored.
LpResult solve_lp(const LinearModel& model, const LpOptions& options = {});

/// As above with bounds replaced by `lb`/`ub` (branch-and-bound nodes).
LpResult solve_lp(const LinearModel& model, std::span<const double> lb, std::span<const double> ub,
                  const LpOptions& options = {});

struct KktReport {
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double complementarity = 0.0;
  double dual_objective = 0.0;
};

/// Optimality certificate check of an optimal LpResult against its model.
KktReport check_kkt(const LinearModel& model, const LpResult& result);

}  // namespace gtce
