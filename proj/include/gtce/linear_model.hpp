#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace gtce {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class VarType { continuous, integer, binary };
enum class RowSense { le, ge, eq };

struct Variable {
  std::string name;
  double lb = 0.0;
  double ub = kInfinity;
  double obj = 0.0;
  VarType type = VarType::continuous;

  bool is_integral() const { return type != VarType::continuous; }
};

struct Term {
  std::size_t var;
  double coef;
};

struct Row {
  std::string name;
  std::string tag;  // equation label or "plumbing"
  std::vector<Term> terms;
  RowSense sense = RowSense::le;
  double rhs = 0.0;
};

/// Minimization model: min obj·x + obj_constant subject to rows and bounds.
class LinearModel {
 public:
  std::size_t add_var(std::string name, double lb, double ub, double obj = 0.0,
                      VarType type = VarType::continuous);
  std::size_t add_row(std::string name, std::string tag, std::vector<Term> terms, RowSense sense, double rhs);

  std::size_t num_vars() const { return vars_.size(); }
  std::size_t num_rows() const { return rows_.size(); }
  const std::vector<Variable>& vars() const { return vars_; }
  const std::vector<Row>& rows() const { return rows_; }
  Variable& var(std::size_t j) { return vars_[j]; }
  const Variable& var(std::size_t j) const { return vars_[j]; }
  Row& row(std::size_t i) { return rows_[i]; }
  const Row& row(std::size_t i) const { return rows_[i]; }

  std::optional<std::size_t> find_var(const std::string& name) const;
  std::optional<std::size_t> find_row(const std::string& name) const;

  double objective_value(std::span<const double> x) const;
  double row_activity(std::size_t i, std::span<const double> x) const;
  /// Largest violation of rows and bounds at `x`.
  double max_violation(std::span<const double> x) const;

  bool has_integers() const;

  double obj_constant = 0.0;

 private:
  std::vector<Variable> vars_;
  std::vector<Row> rows_;
  std::unordered_map<std::string, std::size_t> var_index_;
  std::unordered_map<std::string, std::size_t> row_index_;
};

class model_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gtce
