#include "gtce/branch_and_bound.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "gtce/format.hpp"

namespace gtce {

const char* to_string(MipStatus status)
{
  switch (status) {
    case MipStatus::optimal: return "optimal";
    case MipStatus::infeasible: return "infeasible";
    case MipStatus::unbounded: return "unbounded";
    case MipStatus::node_limit: return "node_limit";
  }
  return "unknown";
}

double relative_gap(double incumbent, double bound)
{
  if (!std::isfinite(incumbent)) return kInfinity;
  if (!std::isfinite(bound)) return kInfinity;
  return std::max(0.0, incumbent - bound) / std::max(1.0, std::abs(incumbent));
}

namespace {

struct OpenNode {
  double key;
  std::size_t id;
  bool operator>(const OpenNode& other) const
  {
    if (key != other.key) return key > other.key;
    return id > other.id;
  }
};

}  // namespace

MipResult solve_mip(const LinearModel& model, const MipOptions& options)
{
  const std::size_t n = model.num_vars();
  std::vector<double> root_lb(n), root_ub(n);
  for (std::size_t j = 0; j < n; ++j) {
    root_lb[j] = model.var(j).lb;
    root_ub[j] = model.var(j).ub;
    if (model.var(j).is_integral()) {
      root_lb[j] = std::ceil(root_lb[j] - options.integrality_tol);
      root_ub[j] = std::floor(root_ub[j] + options.integrality_tol);
    }
  }
  auto log = [&](const std::string& line) {
    if (options.log) options.log(line);
  };

  MipResult result;
  std::vector<BnbNode> nodes;
  std::priority_queue<OpenNode, std::vector<OpenNode>, std::greater<>> open;
  nodes.push_back({0, 0, 0, -kInfinity, {}});
  open.push({-kInfinity, 0});

  std::vector<double> lb, ub;
  double incumbent = kInfinity;
  std::vector<double> incumbent_x;
  bool unbounded = false;
  // smallest relaxation value among nodes discarded by the gap criterion
  double pruned_bound = kInfinity;

  while (!open.empty()) {
    result.best_bound = std::min({open.top().key, incumbent, pruned_bound});
    result.bound_history.push_back(result.best_bound);
    if (std::isfinite(incumbent) && relative_gap(incumbent, result.best_bound) <= options.rel_gap) break;
    if (result.nodes_explored >= options.node_limit) break;

    const OpenNode top = open.top();
    open.pop();
    const BnbNode node = nodes[top.id];
    if (std::isfinite(incumbent) && relative_gap(incumbent, node.bound) <= options.rel_gap) {
      pruned_bound = std::min(pruned_bound, node.bound);
      continue;
    }

    lb = root_lb;
    ub = root_ub;
    for (const auto& [j, l, u] : node.bounds) {
      lb[j] = std::max(lb[j], l);
      ub[j] = std::min(ub[j], u);
    }
    ++result.nodes_explored;
    const LpResult lp = solve_lp(model, lb, ub, options.lp);
    if (lp.status == LpStatus::infeasible) continue;
    if (lp.status == LpStatus::unbounded) {
      unbounded = true;
      break;
    }
    if (lp.status != LpStatus::optimal) throw model_error("solve_mip: node LP hit the iteration limit");
    if (std::isfinite(incumbent) && relative_gap(incumbent, lp.objective) <= options.rel_gap) {
      pruned_bound = std::min(pruned_bound, lp.objective);
      continue;
    }

    // Most fractional integer variable.
    std::size_t branch = n;
    double best_frac = options.integrality_tol;
    for (std::size_t j = 0; j < n; ++j) {
      if (!model.var(j).is_integral()) continue;
      const double f = lp.x[j] - std::floor(lp.x[j]);
      const double dist = std::min(f, 1.0 - f);
      if (dist > best_frac) {
        best_frac = dist;
        branch = j;
      }
    }

    if (branch == n) {
      if (lp.objective < incumbent) {
        incumbent = lp.objective;
        incumbent_x = lp.x;
        result.incumbent_history.push_back(incumbent);
        log("incumbent node " + std::to_string(node.id) + " objective " + fmt_num(incumbent));
      }
      continue;
    }

    ++result.nodes_branched;
    const double v = lp.x[branch];
    BnbNode down{nodes.size(), node.id, node.depth + 1, lp.objective, node.bounds};
    down.bounds.emplace_back(branch, -kInfinity, std::floor(v));
    nodes.push_back(down);
    open.push({lp.objective, down.id});
    BnbNode up{nodes.size(), node.id, node.depth + 1, lp.objective, node.bounds};
    up.bounds.emplace_back(branch, std::ceil(v), kInfinity);
    nodes.push_back(up);
    open.push({lp.objective, up.id});

    if (result.nodes_explored % 50 == 0) {
      log("node " + std::to_string(result.nodes_explored) + " depth " + std::to_string(node.depth) + " bound " +
          fmt_num(result.best_bound) + " incumbent " + fmt_num(incumbent) + " gap " +
          fmt_num(relative_gap(incumbent, result.best_bound)));
    }
  }

  if (unbounded) {
    result.status = MipStatus::unbounded;
    return result;
  }
  if (incumbent_x.empty()) {
    result.status = open.empty() ? MipStatus::infeasible : MipStatus::node_limit;
    return result;
  }
  result.best_bound = std::min({open.empty() ? kInfinity : open.top().key, incumbent, pruned_bound});
  result.gap = relative_gap(incumbent, result.best_bound);
  result.status = result.gap <= options.rel_gap ? MipStatus::optimal : MipStatus::node_limit;

  // Fix integers at their rounded incumbent values and resolve for a clean
  // continuous part and duals.
  lb = root_lb;
  ub = root_ub;
  for (std::size_t j = 0; j < n; ++j) {
    if (!model.var(j).is_integral()) continue;
    lb[j] = ub[j] = std::round(incumbent_x[j]);
  }
  result.final_lp = solve_lp(model, lb, ub, options.lp);
  if (result.final_lp.status == LpStatus::optimal) {
    result.x = result.final_lp.x;
    result.objective = result.final_lp.objective;
  } else {
    result.x = incumbent_x;
    for (std::size_t j = 0; j < n; ++j) {
      if (model.var(j).is_integral()) result.x[j] = std::round(result.x[j]);
    }
    result.objective = model.objective_value(result.x);
  }
  log("done status " + std::string(to_string(result.status)) + " nodes " + std::to_string(result.nodes_explored) +
      " objective " + fmt_num(result.objective) + " gap " + fmt_num(result.gap));
  return result;
}

}  // namespace gtce
