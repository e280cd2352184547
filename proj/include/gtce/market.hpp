#pragma once

#include <map>
#include <string>
#include <vector>

#include "gtce/expansion_model.hpp"
#include "gtce/simplex.hpp"

namespace gtce {

using StepSeries = std::vector<std::vector<double>>;  // [period][step]

/// Dispatch with all investment decisions fixed, one LP per representative
/// week. Energies are GWh per year (weights applied), money M€ per year.
struct MarketOutcome {
  std::vector<std::string> zones;
  std::vector<bool> offshore;
  std::vector<double> weights;
  std::size_t steps = 0;
  double hours_per_step = 1.0;
  std::uint64_t fingerprint = 0;  // mainland demand and week structure

  std::vector<StepSeries> price;       // [zone] €/MWh
  std::vector<StepSeries> demand;      // [zone] GW, zero offshore
  std::vector<StepSeries> shed;        // [zone] GW
  std::vector<StepSeries> res_feed;    // [zone] GW
  std::vector<StepSeries> owp_feed;    // [zone] GW
  std::vector<StepSeries> owp_potential;  // [zone] GW, CF times installed capacity
  std::vector<double> owp_capacity;    // [zone] GW

  std::vector<std::string> unit_ids;
  std::vector<std::string> unit_zone;
  std::vector<double> unit_cost;       // €/MWh
  std::vector<StepSeries> dispatch;    // [unit] GW

  std::map<std::pair<std::string, std::string>, StepSeries> flows;  // directed, GW

  double opex = 0.0;  // weighted dispatch cost incl. lost load, same basis as the expansion OpEx

  std::size_t zone_index(const std::string& id) const;
};

struct DispatchOptions {
  bool offshore = true;
  unsigned jobs = 1;
  LpOptions lp;
};

/// Throws model_error if a week LP is not optimal.
MarketOutcome fixed_topology_dispatch(const Scenario& scenario, const RepresentativeWeeks& weeks,
                                      const Topology& topology, const DispatchOptions& options = {});

/// The topology the reference case runs with: no offshore build, onshore
/// expansions inherited.
Topology reference_topology(const Topology& offshore_case);

/// Weighted sum over a step series of value times duration, scaled from the
/// 52 represented weeks to a full year.
double annual_sum(const MarketOutcome& outcome, const StepSeries& series);

double consumer_surplus_delta(const MarketOutcome& ref, const MarketOutcome& off, const std::string& zone);
double producer_surplus_delta(const MarketOutcome& ref, const MarketOutcome& off, const std::string& zone);
/// Revenue minus zero running cost of the offshore parks in `zone`, M€/a.
double owp_margin(const MarketOutcome& outcome, const std::string& zone);
/// Σ over directed flows of flow times the price difference, M€/a.
double congestion_rent(const MarketOutcome& outcome);
/// Dispatch cost (M€/a) on the annualized basis used by the surplus terms.
double annual_dispatch_cost(const MarketOutcome& outcome);

struct SurplusRow {
  std::string zone;
  double delta_cs = 0.0;
  double delta_ps = 0.0;
};

struct SurplusReport {
  std::vector<SurplusRow> zones;  // mainland zones in model order
  std::map<std::string, double> owp_margin;  // offshore case, per offshore zone
  double delta_congestion_rent = 0.0;  // off - ref
  double delta_owp_margin = 0.0;       // off - ref
  double delta_dispatch_cost = 0.0;    // ref - off
};

SurplusReport compare(const MarketOutcome& ref, const MarketOutcome& off);

/// Each step value repeated for its weighted duration, sorted descending.
std::vector<double> duration_curve(const StepSeries& series, const std::vector<double>& weights,
                                   double hours_per_step);

struct TradeBalance {
  std::string from;
  std::string to;
  double export_twh = 0.0;
  double import_twh = 0.0;
  double net_twh = 0.0;  // export - import
};

/// Per connected ordered pair; both orders are listed so that
/// net(a, b) = -net(b, a).
std::vector<TradeBalance> trade_balance(const MarketOutcome& outcome);

/// Curtailed offshore energy per offshore zone, TWh/a.
std::map<std::string, double> curtailment_twh(const MarketOutcome& outcome);

std::string mcp_csv(const MarketOutcome& outcome, const std::vector<std::size_t>& source_weeks);
std::string surplus_csv(const SurplusReport& report);
std::string balance_csv(const std::vector<TradeBalance>& balance);
std::string duration_csv(const std::vector<double>& curve);

}  // namespace gtce
