#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gtce {

// Internal units: power GW, energy GWh, money M€, distance km,
// prices €/MWh and €/t. Conversions happen at ingestion.

class domain_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct GeoPoint {
  double lon = 0.0;
  double lat = 0.0;
  bool operator==(const GeoPoint&) const = default;
};

enum class ZoneKind { mainland, offshore };

struct Zone {
  std::string id;
  ZoneKind kind = ZoneKind::mainland;
  double landing_cap_gw = 0.0;  // mainland only
  GeoPoint location;
};

enum class Fuel { nuclear, lignite, hard_coal, natural_gas, mixed, hydro };

const char* to_string(Fuel fuel);
Fuel fuel_from_string(const std::string& name);

struct ThermalUnit {
  std::string id;
  std::string zone;
  double capacity_gw = 0.0;
  double efficiency = 1.0;
  Fuel fuel = Fuel::natural_gas;
  double emission_factor = 0.0;  // tCO2 / MWh_th
  double om_cost = 0.0;          // € / MWh_el
};

/// Scalar cost and model parameters. Defaults are the reference values of
/// the North Sea 2030 setting; every field can be overridden from JSON.
struct CostTable {
  double c_b_fix = 0.7;          // M€
  double c_b_on_varL = 4.5;      // M€/km
  double c_b_off_varL = 2.0;     // M€/km
  double c_b_on_varLP = 1.0;     // M€/(km GW)
  double c_b_off_varLP = 1.0;    // M€/(km GW)
  double c_c_fix = 30.0;         // M€
  double c_c_varP_acdc = 750.0;  // M€/GW
  double c_c_varP_dcdc = 125.0;  // M€/GW
  double c_hvdc_varOM = 0.01;    // fraction of CAPEX p.a.
  double c_ntc_varL = 2.0;       // M€/km
  double c_ntc_varLP = 1.0;      // M€/(km GW)
  double c_owp_varP = 2.4;       // M€/MW
  double c_owp_varOM = 0.0625;   // fraction of CAPEX p.a.
  double rho_owp = 7.0;          // MW/km²
  double i_owp = 0.06;
  double i_hvdc = 0.05;
  int n_owp = 27;   // years
  int n_hvdc = 40;  // years
  std::map<Fuel, double> fuel_price{{Fuel::nuclear, 1.7},
                                    {Fuel::lignite, 4.0},
                                    {Fuel::hard_coal, 15.5},
                                    {Fuel::natural_gas, 24.9},
                                    {Fuel::mixed, 24.9},
                                    {Fuel::hydro, 0.0}};  // €/MWh_th
  double c_co2 = 53.0;           // €/tCO2
  double step_gw = 1.0;          // NTC step size s
  double landing_cap_gw = 6.0;   // P^ML,max
  int max_steps_per_arc = 30;    // global cap entering the big-M bound
  double voll = 3000.0;          // €/MWh, lost-load penalty
  double hydro_availability = 0.45;
};

/// Fuel-dependent emission factors (tCO2/MWh_th). Not part of the cost table
/// because they are engineering defaults rather than market assumptions.
std::map<Fuel, double> default_emission_factors();

struct CandidateSite {
  std::string id;
  std::vector<GeoPoint> polygon;
  double power_density = 7.0;  // MW/km²
};

/// Buildable connection between two zones. Offshore arcs involve at least one
/// offshore zone; onshore corridors join two mainland zones.
struct ArcSpec {
  std::string from;
  std::string to;
  std::optional<double> distance_km;  // haversine of zone locations if unset
  std::optional<double> onshore_share;
};

struct OnshoreCorridor {
  std::string from;
  std::string to;
  double max_added_gw = 10.0;
  std::optional<double> distance_km;
};

/// Rule that derives the permissible offshore arcs once offshore zones are
/// generated from site clusters.
struct ArcRule {
  double max_length_km = 400.0;
  std::vector<std::string> mainland;  // empty: all mainland zones
  bool offshore_to_offshore = true;
  double onshore_tail_km = 10.0;
};

/// Installed renewable capacity of a mainland zone; feed-in follows the
/// matching capacity-factor series.
struct RenewableFleet {
  double onshore_wind_gw = 0.0;
  double offshore_wind_gw = 0.0;  // existing parks, fixed
  double pv_gw = 0.0;
};

struct Scenario {
  std::string name;
  std::vector<Zone> zones;
  std::vector<ThermalUnit> units;
  std::map<std::string, std::vector<double>> load;  // hourly GW per mainland zone
  std::map<std::string, RenewableFleet> renewables;
  std::vector<CandidateSite> sites;
  CostTable costs;
  // Existing NTC between mainland zones, GW, indexed like `zones`.
  std::vector<std::vector<double>> ntc;
  std::vector<ArcSpec> offshore_arcs;  // permissible-connection mask
  ArcRule arc_rule;
  std::vector<OnshoreCorridor> corridors;
  std::map<std::string, double> max_available_gw;  // explicit offshore zones
  double co2_multiplier = 1.0;

  std::optional<std::size_t> zone_index(const std::string& id) const;
  const Zone& zone(const std::string& id) const;
  bool is_offshore(const std::string& id) const;
};

// Annualization arithmetic.
double crf(double interest, int lifetime_years);
double annualize(double capex, double crf_value, double om_rate);
double co2_price(double base, double multiplier);
long co2_price_display(double base, double multiplier);
double marginal_cost(const ThermalUnit& unit, double fuel_price, double co2);
double marginal_cost(const ThermalUnit& unit, const CostTable& costs, double co2);

double crf_owp(const CostTable& costs);
double crf_hvdc(const CostTable& costs);

/// Effective CO2 price of the scenario, unrounded.
double effective_co2(const Scenario& scenario);

std::vector<std::string> validate(const Scenario& scenario);

/// Stable 64-bit FNV-1a digest, used for fingerprints and run ids.
std::uint64_t fnv1a(const std::string& data, std::uint64_t seed = 14695981039346656037ull);
std::string hex64(std::uint64_t value);

}  // namespace gtce
