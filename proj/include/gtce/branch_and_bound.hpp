#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "gtce/linear_model.hpp"
#include "gtce/simplex.hpp"

namespace gtce {

enum class MipStatus { optimal, infeasible, unbounded, node_limit };

const char* to_string(MipStatus status);

struct MipOptions {
  double rel_gap = 1e-4;
  std::size_t node_limit = 200000;
  double integrality_tol = 1e-6;
  LpOptions lp;
  std::function<void(const std::string&)> log;  // one line per event
};

struct BnbNode {
  std::size_t id = 0;
  std::size_t parent = 0;
  int depth = 0;
  double bound = -kInfinity;  // parent's relaxation value
  // (variable, lower, upper) tightenings relative to the root
  std::vector<std::tuple<std::size_t, double, double>> bounds;
};

struct MipResult {
  MipStatus status = MipStatus::infeasible;
  double objective = kInfinity;
  double best_bound = -kInfinity;
  double gap = kInfinity;
  std::vector<double> x;
  LpResult final_lp;  // LP with integers fixed at the incumbent; supplies duals
  std::size_t nodes_explored = 0;
  std::size_t nodes_branched = 0;
  std::vector<double> bound_history;
  std::vector<double> incumbent_history;
};

double relative_gap(double incumbent, double bound);

/// Best-first branch-and-bound over the integer and binary variables.
/// Branches on the most fractional variable (ties to the lowest index);
/// equal node bounds are explored in creation order.
MipResult solve_mip(const LinearModel& model, const MipOptions& options = {});

}  // namespace gtce
