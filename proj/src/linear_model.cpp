#include "gtce/linear_model.hpp"

#include <algorithm>
#include <cmath>

namespace gtce {

std::size_t LinearModel::add_var(std::string name, double lb, double ub, double obj, VarType type)
{
  if (lb > ub) throw model_error("variable " + name + ": lower bound exceeds upper bound");
  if (type == VarType::binary) {
    lb = std::max(lb, 0.0);
    ub = std::min(ub, 1.0);
  }
  const std::size_t j = vars_.size();
  if (!var_index_.emplace(name, j).second) throw model_error("duplicate variable name " + name);
  vars_.push_back({std::move(name), lb, ub, obj, type});
  return j;
}

std::size_t LinearModel::add_row(std::string name, std::string tag, std::vector<Term> terms, RowSense sense,
                                 double rhs)
{
  const std::size_t i = rows_.size();
  if (!row_index_.emplace(name, i).second) throw model_error("duplicate row name " + name);
  // merge duplicate references, drop zeros, keep first-seen order
  std::vector<Term> merged;
  for (const auto& t : terms) {
    if (t.var >= vars_.size()) throw model_error("row " + name + " references unknown variable");
    auto it = std::find_if(merged.begin(), merged.end(), [&](const Term& m) { return m.var == t.var; });
    if (it == merged.end()) merged.push_back(t);
    else it->coef += t.coef;
  }
  std::erase_if(merged, [](const Term& t) { return t.coef == 0.0; });
  rows_.push_back({std::move(name), std::move(tag), std::move(merged), sense, rhs});
  return i;
}

std::optional<std::size_t> LinearModel::find_var(const std::string& name) const
{
  auto it = var_index_.find(name);
  if (it == var_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> LinearModel::find_row(const std::string& name) const
{
  auto it = row_index_.find(name);
  if (it == row_index_.end()) return std::nullopt;
  return it->second;
}

double LinearModel::objective_value(std::span<const double> x) const
{
  double v = obj_constant;
  for (std::size_t j = 0; j < vars_.size(); ++j) v += vars_[j].obj * x[j];
  return v;
}

double LinearModel::row_activity(std::size_t i, std::span<const double> x) const
{
  double a = 0.0;
  for (const auto& t : rows_[i].terms) a += t.coef * x[t.var];
  return a;
}

double LinearModel::max_violation(std::span<const double> x) const
{
  double worst = 0.0;
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    worst = std::max({worst, vars_[j].lb - x[j], x[j] - vars_[j].ub});
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const double a = row_activity(i, x);
    const auto& r = rows_[i];
    switch (r.sense) {
      case RowSense::le: worst = std::max(worst, a - r.rhs); break;
      case RowSense::ge: worst = std::max(worst, r.rhs - a); break;
      case RowSense::eq: worst = std::max(worst, std::abs(a - r.rhs)); break;
    }
  }
  return worst;
}

bool LinearModel::has_integers() const
{
  return std::any_of(vars_.begin(), vars_.end(), [](const Variable& v) { return v.is_integral(); });
}

}  // namespace gtce
