#pragma once

#include <span>
#include <string>
#include <vector>

#include "gtce/linear_model.hpp"

namespace gtce {

class lp_parse_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// True if `name` is usable in an LP file as written by export_lp.
bool is_valid_lp_name(const std::string& name);

/// Throws model_error on names that the LP format cannot carry.
void check_lp_names(const LinearModel& model);

/// CPLEX-style LP text. Rows keep model order and carry their tag in a
/// preceding comment; every variable appears in the Bounds section in model
/// order, so exports are canonical and diff cleanly.
std::string export_lp(const LinearModel& model, const std::string& title = "");

/// Reads LP text. Row tags written by export_lp are restored.
LinearModel parse_lp(const std::string& text);

/// "name value" lines, one per variable, model order.
std::string export_solution(const LinearModel& model, std::span<const double> x, double objective);

/// Reads "name value" lines (comments start with '#'); variables that are
/// not listed are zero. Unknown names are an error.
std::vector<double> import_solution(const LinearModel& model, const std::string& text);

}  // namespace gtce
