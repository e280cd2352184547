#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gtce/branch_and_bound.hpp"
#include "gtce/geo.hpp"
#include "gtce/linear_model.hpp"
#include "gtce/scenario.hpp"
#include "gtce/time_cluster.hpp"

namespace gtce {

/// Buildable HVDC corridor touching at least one offshore zone.
struct ArcGeometry {
  std::string from;
  std::string to;
  double distance_km = 0.0;
  double onshore_share = 0.0;
  double offshore_share = 1.0;
};

/// Length-dependent cable cost of one corridor, M€.
double cable_cost_varL(const ArcGeometry& arc, const CostTable& costs);
/// Length- and power-dependent cable cost, M€ per GW.
double cable_cost_varLP(const ArcGeometry& arc, const CostTable& costs);

/// Appends one offshore zone per converter cluster ("OBZ1", "OBZ2", ...,
/// numbered in cluster order) with the pooled capacity as its availability.
Scenario with_offshore_zones(const Scenario& scenario, const std::vector<ConverterCluster>& clusters,
                             const std::string& prefix = "OBZ");

/// Permissible offshore corridors: the explicit list if the scenario has
/// one, otherwise those generated by its arc rule.
std::vector<ArcGeometry> offshore_arcs(const Scenario& scenario);

/// Mainland pair with existing NTC and/or an expansion corridor.
struct OnshoreLink {
  std::string from;
  std::string to;
  double existing_gw = 0.0;
  bool expandable = false;
  double max_added_gw = 0.0;
  double distance_km = 0.0;
};

std::vector<OnshoreLink> onshore_links(const Scenario& scenario);

/// Investment decisions of a solved model; used to fix a model for
/// downstream dispatch and to compare configurations.
struct Topology {
  struct Arc {
    std::string from;
    std::string to;
    int steps = 0;
    bool built = false;
  };
  struct Corridor {
    std::string from;
    std::string to;
    bool built = false;
    double added_gw = 0.0;
  };
  std::vector<Arc> arcs;
  std::vector<Corridor> corridors;
  std::map<std::string, double> owp_gw;
  std::map<std::string, double> converter_onshore_gw;   // per mainland zone
  std::map<std::string, double> converter_offshore_gw;  // per offshore zone

  double total_owp_gw() const;
  int built_arcs() const;
};

struct ExpansionOptions {
  bool allow_offshore = true;            // false: offshore zones and arcs are dropped
  bool allow_onshore_expansion = true;   // false: corridors keep their existing NTC
  std::optional<Topology> fixed;         // fix all investment decisions
  std::optional<std::size_t> only_period;  // single week with weight one
  bool allow_lost_load = true;           // lost load at the VoLL penalty
};

/// Series names the model reads from representative weeks.
std::string load_series(const std::string& zone);
std::string offshore_cf_series(const std::string& zone);
std::string fleet_cf_series(const std::string& zone, const std::string& technology);  // wind_on, wind_off, pv

struct ExpansionModel {
  LinearModel lp;

  std::vector<std::string> zones;  // mainland first (scenario order), then offshore
  std::vector<bool> offshore;
  std::vector<ArcGeometry> arcs;
  std::vector<int> big_m;
  std::vector<double> landing_cap_gw;  // [zone], mainland only
  std::vector<OnshoreLink> links;
  std::vector<ThermalUnit> units;
  std::vector<double> unit_cost;  // €/MWh_el
  std::vector<std::size_t> periods;  // source week indices
  std::vector<double> weights;       // N_z used in the objective
  std::size_t steps = 0;
  double hours_per_step = 1.0;
  CostTable costs;
  std::map<std::string, std::vector<std::vector<double>>> load;  // zone -> [period][step] GW
  std::map<std::string, std::vector<std::vector<double>>> res_available;
  std::map<std::string, std::vector<std::vector<double>>> owp_cf;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  // Variable ids, indexed [period][step] where applicable.
  std::vector<std::vector<std::vector<std::size_t>>> unit_var;  // [unit][period][step]
  std::vector<std::vector<std::vector<std::size_t>>> res_var;   // [zone][period][step], npos for offshore
  std::vector<std::vector<std::vector<std::size_t>>> shed_var;  // [zone][period][step], npos if disabled
  std::vector<std::vector<std::vector<std::size_t>>> owp_var;   // [zone][period][step], npos for mainland
  std::vector<std::vector<std::vector<std::size_t>>> nex_var;   // [zone][period][step]
  std::vector<std::vector<std::vector<std::size_t>>> balance_row;  // [zone][period][step]
  std::vector<std::array<std::vector<std::vector<std::size_t>>, 2>> arc_flow;   // [arc][dir][period][step]
  std::vector<std::array<std::vector<std::vector<std::size_t>>, 2>> link_flow;  // [link][dir][period][step]
  std::vector<std::array<std::size_t, 2>> ntc_var;  // [arc][dir]
  std::vector<std::array<std::size_t, 2>> adj_var;  // [arc][dir]
  std::vector<std::size_t> pmax_var;      // [zone], npos for mainland
  std::vector<std::size_t> conv_on_var;   // [zone], npos unless mainland with offshore arcs
  std::vector<std::size_t> conv_off_var;  // [zone], npos for mainland
  std::vector<std::size_t> corridor_var;  // [link], npos unless expandable
  std::vector<std::size_t> added_var;     // [link], npos unless expandable

  std::vector<std::string> warnings;

  std::size_t zone_index(const std::string& id) const;
  bool is_offshore(std::size_t zone) const { return offshore[zone]; }
  /// Row count per tag.
  std::map<std::string, std::size_t> tag_census() const;
};

/// Assembles the expansion MILP. Throws domain_error on missing series or
/// when the system cannot cover load and lost load is disabled.
ExpansionModel build_model(const Scenario& scenario, const RepresentativeWeeks& weeks,
                           const ExpansionOptions& options = {});

/// Convenience overload: offshore zones from converter clusters first.
ExpansionModel build_model(const Scenario& scenario, const std::vector<ConverterCluster>& clusters,
                           const RepresentativeWeeks& weeks, const ExpansionOptions& options = {});

/// Closed-form row count per tag for a model's shape.
std::map<std::string, std::size_t> expected_census(const ExpansionModel& model);

/// Annualized cost terms (M€/a), each evaluated from the variable values.
struct CostBreakdown {
  double opex = 0.0;  // dispatch incl. lost-load penalty
  double ac_owp = 0.0;
  double ac_c_fix = 0.0;
  double ac_c_varP_acdc = 0.0;
  double ac_c_varP_dcdc = 0.0;
  double ac_b_fix = 0.0;
  double ac_b_varL = 0.0;
  double ac_b_varLP = 0.0;
  double ac_ntc_onshore = 0.0;

  double ac_hvdc() const { return ac_c_fix + ac_c_varP_acdc + ac_c_varP_dcdc + ac_b_fix + ac_b_varL + ac_b_varLP; }
  double total() const { return opex + ac_owp + ac_hvdc() + ac_ntc_onshore; }
  std::vector<std::pair<std::string, double>> terms() const;
};

/// Throws model_error if the terms do not add up to the objective within
/// `rel_tol`.
CostBreakdown cost_breakdown(const ExpansionModel& model, const std::vector<double>& x, double rel_tol = 1e-6);

struct Solution {
  MipStatus status = MipStatus::infeasible;
  double objective = 0.0;
  double best_bound = 0.0;
  double gap = 0.0;
  std::vector<double> x;
  std::vector<double> duals;  // from the LP with investments fixed
  CostBreakdown breakdown;
  std::size_t nodes = 0;
};

Solution solve(const ExpansionModel& model, const MipOptions& options = {});

Topology extract_topology(const ExpansionModel& model, const std::vector<double>& x);

/// Structural invariants of a solution; returns one message per violation.
std::vector<std::string> check_invariants(const ExpansionModel& model, const std::vector<double>& x,
                                          double tol = 1e-6);

/// Total flow from `from` to `to` in one step (GW); zero without a connection.
double flow_between(const ExpansionModel& model, const std::vector<double>& x, std::size_t from, std::size_t to,
                    std::size_t period, std::size_t step);

/// Load-coverage price of a zone-step, €/MWh, from LP duals.
double clearing_price(const ExpansionModel& model, const std::vector<double>& duals, std::size_t zone,
                      std::size_t period, std::size_t step);

/// Variable-name fragment: characters outside [A-Za-z0-9_] become '_'.
std::string sanitize(const std::string& id);

}  // namespace gtce
