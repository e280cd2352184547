#include "gtce/simplex.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>

namespace gtce {

const char* to_string(LpStatus status)
{
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

namespace {

using SpMat = Eigen::SparseMatrix<double, Eigen::ColMajor>;
using Vec = Eigen::VectorXd;

enum State : char { kBasic = 0, kAtLower = 1, kAtUpper = 2, kFreeZero = 3 };

// Bounded revised simplex over [A | I | artificials] with product-form
// updates on top of a sparse LU of the last refactored basis.
class RevisedSimplex {
 public:
  RevisedSimplex(const LinearModel& model, std::span<const double> lb, std::span<const double> ub,
                 const LpOptions& options)
      : model_(model), opt_(options), m_(static_cast<int>(model.num_rows())), n_(static_cast<int>(model.num_vars()))
  {
    build(lb, ub);
  }

  LpResult run();

 private:
  const LinearModel& model_;
  LpOptions opt_;
  int m_;
  int n_;
  int ncols_ = 0;

  SpMat a_;
  std::vector<double> row_scale_, col_scale_;
  std::vector<double> cost_, lb_, ub_, b_, x_;
  std::vector<int> art_row_;
  std::vector<double> art_sign_;
  std::vector<State> state_;
  std::vector<int> basis_;

  mutable Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
  struct Eta {
    int row;
    double pivot;
    std::vector<std::pair<int, double>> entries;  // excluding the pivot row
  };
  std::vector<Eta> etas_;
  int iterations_ = 0;
  int max_iterations_ = 0;

  void build(std::span<const double> lb, std::span<const double> ub);

  template <typename Fn>
  void for_column(int j, Fn&& fn) const
  {
    if (j < n_) {
      for (SpMat::InnerIterator it(a_, j); it; ++it) fn(static_cast<int>(it.row()), it.value());
    } else if (j < n_ + m_) {
      fn(j - n_, 1.0);
    } else {
      const int k = j - n_ - m_;
      fn(art_row_[k], art_sign_[k]);
    }
  }

  bool factorize();
  void ftran(Vec& v) const;
  void btran(Vec& v) const;
  void recompute_basics();
  double nonbasic_value(int j) const;

  enum class Outcome { optimal, unbounded, limit };
  Outcome optimize(const std::vector<double>& cost, std::optional<std::size_t>& ray);
};

void RevisedSimplex::build(std::span<const double> lb, std::span<const double> ub)
{
  // Equilibration: rows then columns to unit max-abs.
  row_scale_.assign(m_, 1.0);
  col_scale_.assign(n_, 1.0);
  if (opt_.equilibrate) {
    for (int i = 0; i < m_; ++i) {
      double mx = 0.0;
      for (const auto& t : model_.row(i).terms) mx = std::max(mx, std::abs(t.coef));
      if (mx > 0.0) row_scale_[i] = 1.0 / mx;
    }
    std::vector<double> col_max(n_, 0.0);
    for (int i = 0; i < m_; ++i) {
      for (const auto& t : model_.row(i).terms)
        col_max[t.var] = std::max(col_max[t.var], std::abs(t.coef * row_scale_[i]));
    }
    for (int j = 0; j < n_; ++j) {
      if (col_max[j] > 0.0) col_scale_[j] = 1.0 / col_max[j];
    }
  }

  std::vector<Eigen::Triplet<double>> trips;
  for (int i = 0; i < m_; ++i) {
    for (const auto& t : model_.row(i).terms)
      trips.emplace_back(i, static_cast<int>(t.var), t.coef * row_scale_[i] * col_scale_[t.var]);
  }
  a_.resize(m_, n_);
  a_.setFromTriplets(trips.begin(), trips.end());
  a_.makeCompressed();

  ncols_ = n_ + m_;
  cost_.assign(ncols_, 0.0);
  lb_.assign(ncols_, 0.0);
  ub_.assign(ncols_, 0.0);
  b_.assign(m_, 0.0);
  for (int j = 0; j < n_; ++j) {
    cost_[j] = model_.var(j).obj * col_scale_[j];
    lb_[j] = lb[j] / col_scale_[j];
    ub_[j] = ub[j] / col_scale_[j];
  }
  for (int i = 0; i < m_; ++i) {
    const auto& row = model_.row(i);
    b_[i] = row.rhs * row_scale_[i];
    const int s = n_ + i;
    switch (row.sense) {
      case RowSense::le: lb_[s] = 0.0; ub_[s] = kInfinity; break;
      case RowSense::ge: lb_[s] = -kInfinity; ub_[s] = 0.0; break;
      case RowSense::eq: lb_[s] = 0.0; ub_[s] = 0.0; break;
    }
  }
}

double RevisedSimplex::nonbasic_value(int j) const
{
  if (std::isfinite(lb_[j])) return lb_[j];
  if (std::isfinite(ub_[j])) return ub_[j];
  return 0.0;
}

bool RevisedSimplex::factorize()
{
  std::vector<Eigen::Triplet<double>> trips;
  for (int k = 0; k < m_; ++k) for_column(basis_[k], [&](int i, double v) { trips.emplace_back(i, k, v); });
  SpMat b(m_, m_);
  b.setFromTriplets(trips.begin(), trips.end());
  b.makeCompressed();
  lu_.analyzePattern(b);
  lu_.factorize(b);
  etas_.clear();
  return lu_.info() == Eigen::Success;
}

void RevisedSimplex::ftran(Vec& v) const
{
  v = lu_.solve(v);
  for (const auto& eta : etas_) {
    const double vr = v[eta.row] / eta.pivot;
    v[eta.row] = vr;
    if (vr != 0.0) {
      for (const auto& [i, a] : eta.entries) v[i] -= a * vr;
    }
  }
}

void RevisedSimplex::btran(Vec& v) const
{
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double s = v[it->row];
    for (const auto& [i, a] : it->entries) s -= v[i] * a;
    v[it->row] = s / it->pivot;
  }
  v = lu_.transpose().solve(v);
}

void RevisedSimplex::recompute_basics()
{
  Vec rhs(m_);
  for (int i = 0; i < m_; ++i) rhs[i] = b_[i];
  for (int j = 0; j < ncols_; ++j) {
    if (state_[j] == kBasic || x_[j] == 0.0) continue;
    const double xj = x_[j];
    for_column(j, [&](int i, double v) { rhs[i] -= v * xj; });
  }
  ftran(rhs);
  for (int k = 0; k < m_; ++k) x_[basis_[k]] = rhs[k];
}

RevisedSimplex::Outcome RevisedSimplex::optimize(const std::vector<double>& cost, std::optional<std::size_t>& ray)
{
  int degenerate_streak = 0;
  bool bland = false;
  int since_refactor = 0;
  Vec y(m_), alpha(m_);

  while (true) {
    if (iterations_ >= max_iterations_) return Outcome::limit;
    if (since_refactor >= opt_.refactor_interval) {
      if (!factorize()) throw model_error("simplex: singular basis on refactorization");
      recompute_basics();
      since_refactor = 0;
    }

    for (int k = 0; k < m_; ++k) y[k] = cost[basis_[k]];
    btran(y);

    // Pricing.
    int q = -1;
    double best = 0.0;
    double dir = 0.0;
    for (int j = 0; j < ncols_; ++j) {
      if (state_[j] == kBasic || lb_[j] == ub_[j]) continue;
      double d = cost[j];
      for_column(j, [&](int i, double v) { d -= y[i] * v; });
      double gain = 0.0;
      double step = 0.0;
      if ((state_[j] == kAtLower || state_[j] == kFreeZero) && d < -opt_.dual_tol) {
        gain = -d;
        step = 1.0;
      } else if ((state_[j] == kAtUpper || state_[j] == kFreeZero) && d > opt_.dual_tol) {
        gain = d;
        step = -1.0;
      }
      if (step == 0.0) continue;
      if (bland) {
        q = j;
        dir = step;
        break;
      }
      if (gain > best) {
        best = gain;
        q = j;
        dir = step;
      }
    }
    if (q < 0) {
      if (since_refactor == 0) return Outcome::optimal;
      // confirm on a fresh factorization before declaring optimality
      since_refactor = opt_.refactor_interval;
      continue;
    }

    alpha.setZero();
    for_column(q, [&](int i, double v) { alpha[i] = v; });
    ftran(alpha);

    // Ratio test.
    double theta = kInfinity;
    int leave = -1;
    bool leave_to_upper = false;
    if (std::isfinite(lb_[q]) && std::isfinite(ub_[q])) theta = ub_[q] - lb_[q];
    double leave_pivot = 0.0;
    for (int k = 0; k < m_; ++k) {
      const double a = alpha[k];
      if (std::abs(a) < opt_.pivot_tol) continue;
      const int j = basis_[k];
      const double rate = -dir * a;  // change of x_j per unit step
      double ratio;
      bool to_upper;
      if (rate < 0.0) {
        if (!std::isfinite(lb_[j])) continue;
        ratio = (x_[j] - lb_[j]) / -rate;
        to_upper = false;
      } else {
        if (!std::isfinite(ub_[j])) continue;
        ratio = (ub_[j] - x_[j]) / rate;
        to_upper = true;
      }
      ratio = std::max(ratio, 0.0);
      const double eps = 1e-12 * std::max(1.0, theta == kInfinity ? ratio : theta);
      bool take = false;
      if (ratio < theta - eps) {
        take = true;
      } else if (ratio <= theta + eps && leave >= 0) {
        take = bland ? j < basis_[leave] : std::abs(a) > std::abs(leave_pivot);
      }
      if (take) {
        theta = ratio;
        leave = k;
        leave_to_upper = to_upper;
        leave_pivot = a;
      }
    }
    if (!std::isfinite(theta)) {
      ray = static_cast<std::size_t>(q);
      return Outcome::unbounded;
    }

    ++iterations_;
    if (theta <= 1e-12) {
      if (++degenerate_streak >= opt_.degenerate_before_bland) bland = true;
    } else {
      degenerate_streak = 0;
      bland = false;
    }

    if (theta != 0.0) {
      x_[q] += dir * theta;
      for (int k = 0; k < m_; ++k) {
        if (alpha[k] != 0.0) x_[basis_[k]] -= dir * theta * alpha[k];
      }
    }
    if (leave < 0) {
      // bound flip of the entering variable
      state_[q] = dir > 0 ? kAtUpper : kAtLower;
      x_[q] = dir > 0 ? ub_[q] : lb_[q];
      continue;
    }
    const int out = basis_[leave];
    state_[out] = leave_to_upper ? kAtUpper : kAtLower;
    x_[out] = leave_to_upper ? ub_[out] : lb_[out];
    state_[q] = kBasic;
    basis_[leave] = q;

    Eta eta{leave, alpha[leave], {}};
    for (int k = 0; k < m_; ++k) {
      if (k != leave && std::abs(alpha[k]) > 1e-14) eta.entries.emplace_back(k, alpha[k]);
    }
    etas_.push_back(std::move(eta));
    ++since_refactor;
  }
}

LpResult RevisedSimplex::run()
{
  LpResult result;
  max_iterations_ = opt_.max_iterations > 0 ? opt_.max_iterations : 50 * (m_ + n_) + 1000;

  // Start from all structurals at a bound and slacks basic; rows whose slack
  // would violate its bounds get an artificial instead.
  x_.assign(ncols_, 0.0);
  state_.assign(ncols_, kAtLower);
  for (int j = 0; j < n_; ++j) {
    x_[j] = nonbasic_value(j);
    state_[j] = std::isfinite(lb_[j]) ? kAtLower : (std::isfinite(ub_[j]) ? kAtUpper : kFreeZero);
  }
  std::vector<double> residual(b_);
  for (int j = 0; j < n_; ++j) {
    if (x_[j] == 0.0) continue;
    for (SpMat::InnerIterator it(a_, j); it; ++it) residual[it.row()] -= it.value() * x_[j];
  }
  basis_.assign(m_, -1);
  for (int i = 0; i < m_; ++i) {
    const int s = n_ + i;
    const double r = residual[i];
    if (r >= lb_[s] - opt_.primal_tol && r <= ub_[s] + opt_.primal_tol) {
      basis_[i] = s;
      state_[s] = kBasic;
      x_[s] = r;
    } else {
      const double at = r < lb_[s] ? lb_[s] : ub_[s];
      x_[s] = at;
      state_[s] = at == lb_[s] ? kAtLower : kAtUpper;
      const double rem = r - at;
      art_row_.push_back(i);
      art_sign_.push_back(rem > 0 ? 1.0 : -1.0);
      cost_.push_back(0.0);
      lb_.push_back(0.0);
      ub_.push_back(kInfinity);
      x_.push_back(std::abs(rem));
      state_.push_back(kBasic);
      basis_[i] = ncols_ + static_cast<int>(art_row_.size()) - 1;
    }
  }
  const int n_art = static_cast<int>(art_row_.size());
  ncols_ += n_art;
  if (!factorize()) throw model_error("simplex: singular initial basis");

  std::optional<std::size_t> ray;
  if (n_art > 0) {
    std::vector<double> phase1(ncols_, 0.0);
    for (int k = 0; k < n_art; ++k) phase1[n_ + m_ + k] = 1.0;
    const auto outcome = optimize(phase1, ray);
    if (outcome == Outcome::limit) {
      result.status = LpStatus::iteration_limit;
      result.iterations = iterations_;
      return result;
    }
    for (int k = 0; k < n_art; ++k) {
      const int j = n_ + m_ + k;
      if (x_[j] > opt_.primal_tol) {
        result.status = LpStatus::infeasible;
        result.certificate_row = static_cast<std::size_t>(art_row_[k]);
        result.iterations = iterations_;
        return result;
      }
      ub_[j] = 0.0;
      if (state_[j] != kBasic) {
        state_[j] = kAtLower;
        x_[j] = 0.0;
      }
    }
  }

  const auto outcome = optimize(cost_, ray);
  result.iterations = iterations_;
  if (outcome == Outcome::limit) {
    result.status = LpStatus::iteration_limit;
    return result;
  }
  if (outcome == Outcome::unbounded) {
    result.status = LpStatus::unbounded;
    if (ray && *ray < static_cast<std::size_t>(n_)) result.certificate_col = *ray;
    return result;
  }

  Vec y(m_);
  for (int k = 0; k < m_; ++k) y[k] = cost_[basis_[k]];
  btran(y);

  result.status = LpStatus::optimal;
  result.x.resize(n_);
  result.reduced_costs.resize(n_);
  for (int j = 0; j < n_; ++j) {
    double xv = x_[j];
    // snap values within tolerance of a bound
    if (std::isfinite(lb_[j]) && std::abs(xv - lb_[j]) <= 1e-11 * std::max(1.0, std::abs(lb_[j]))) xv = lb_[j];
    if (std::isfinite(ub_[j]) && std::abs(xv - ub_[j]) <= 1e-11 * std::max(1.0, std::abs(ub_[j]))) xv = ub_[j];
    result.x[j] = xv * col_scale_[j];
    double d = cost_[j];
    for (SpMat::InnerIterator it(a_, j); it; ++it) d -= y[it.row()] * it.value();
    result.reduced_costs[j] = d / col_scale_[j];
  }
  result.duals.resize(m_);
  for (int i = 0; i < m_; ++i) result.duals[i] = y[i] * row_scale_[i];
  result.objective = model_.objective_value(result.x);
  return result;
}

}  // namespace

LpResult solve_lp(const LinearModel& model, const LpOptions& options)
{
  std::vector<double> lb(model.num_vars()), ub(model.num_vars());
  for (std::size_t j = 0; j < model.num_vars(); ++j) {
    lb[j] = model.var(j).lb;
    ub[j] = model.var(j).ub;
  }
  return solve_lp(model, lb, ub, options);
}

LpResult solve_lp(const LinearModel& model, std::span<const double> lb, std::span<const double> ub,
                  const LpOptions& options)
{
  if (lb.size() != model.num_vars() || ub.size() != model.num_vars())
    throw model_error("solve_lp: bound vector size mismatch");
  for (std::size_t j = 0; j < lb.size(); ++j) {
    if (lb[j] > ub[j]) {
      LpResult infeasible;
      infeasible.status = LpStatus::infeasible;
      return infeasible;
    }
  }
  if (model.num_rows() == 0) {
    // Pure bound problem: each variable sits at its cheaper bound.
    LpResult r;
    r.status = LpStatus::optimal;
    r.x.resize(model.num_vars());
    r.reduced_costs.resize(model.num_vars());
    for (std::size_t j = 0; j < model.num_vars(); ++j) {
      const double c = model.var(j).obj;
      double v = c > 0 ? lb[j] : (c < 0 ? ub[j] : (std::isfinite(lb[j]) ? lb[j] : (std::isfinite(ub[j]) ? ub[j] : 0.0)));
      if (!std::isfinite(v)) {
        r.status = LpStatus::unbounded;
        r.certificate_col = j;
        return r;
      }
      r.x[j] = v;
      r.reduced_costs[j] = c;
    }
    r.objective = model.objective_value(r.x);
    return r;
  }
  RevisedSimplex simplex(model, lb, ub, options);
  return simplex.run();
}

KktReport check_kkt(const LinearModel& model, const LpResult& result)
{
  KktReport rep;
  if (result.status != LpStatus::optimal) return rep;
  rep.primal_infeasibility = model.max_violation(result.x);
  double dual_obj = model.obj_constant;
  for (std::size_t i = 0; i < model.num_rows(); ++i) {
    const auto& row = model.row(i);
    const double y = result.duals[i];
    const double slack = row.rhs - model.row_activity(i, result.x);
    if (row.sense == RowSense::le) rep.dual_infeasibility = std::max(rep.dual_infeasibility, y);
    if (row.sense == RowSense::ge) rep.dual_infeasibility = std::max(rep.dual_infeasibility, -y);
    if (row.sense != RowSense::eq) rep.complementarity = std::max(rep.complementarity, std::abs(y * slack));
    dual_obj += y * row.rhs;
  }
  for (std::size_t j = 0; j < model.num_vars(); ++j) {
    const auto& v = model.var(j);
    const double d = result.reduced_costs[j];
    const double x = result.x[j];
    // d > 0 must be supported by a finite lower bound, d < 0 by an upper one
    if (d > 0) {
      if (!std::isfinite(v.lb)) rep.dual_infeasibility = std::max(rep.dual_infeasibility, d);
      else {
        dual_obj += d * v.lb;
        rep.complementarity = std::max(rep.complementarity, std::abs(d * (x - v.lb)));
      }
    } else if (d < 0) {
      if (!std::isfinite(v.ub)) rep.dual_infeasibility = std::max(rep.dual_infeasibility, -d);
      else {
        dual_obj += d * v.ub;
        rep.complementarity = std::max(rep.complementarity, std::abs(d * (v.ub - x)));
      }
    }
  }
  rep.dual_objective = dual_obj;
  return rep;
}

}  // namespace gtce
