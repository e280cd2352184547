#pragma once

// Small hand-built scenarios shared by the unit and acceptance tests.

#include <random>
#include <string>
#include <vector>

#include "gtce/expansion_model.hpp"
#include "gtce/scenario.hpp"
#include "gtce/time_cluster.hpp"

namespace fixtures {

using Profile = std::vector<std::vector<double>>;  // [period][step]

inline gtce::RepresentativeWeeks make_weeks(std::vector<int> weights, std::size_t steps, double hours_per_step,
                                            const std::vector<std::pair<std::string, Profile>>& series)
{
  gtce::RepresentativeWeeks w;
  w.steps = steps;
  w.hours_per_step = hours_per_step;
  w.weights = std::move(weights);
  for (std::size_t p = 0; p < w.weights.size(); ++p) w.source_weeks.push_back(p);
  for (const auto& [name, prof] : series) w.series.push_back(name);
  w.profiles.assign(w.weights.size(), {});
  for (std::size_t p = 0; p < w.weights.size(); ++p) {
    for (const auto& [name, prof] : series) w.profiles[p].push_back(prof[p]);
  }
  return w;
}

inline Profile constant(std::size_t periods, std::size_t steps, double v)
{
  return Profile(periods, std::vector<double>(steps, v));
}

inline gtce::Zone mainland(const std::string& id, double lon, double lat, double landing = 6.0)
{
  return {id, gtce::ZoneKind::mainland, landing, {lon, lat}};
}

inline gtce::Zone offshore(const std::string& id, double lon, double lat)
{
  return {id, gtce::ZoneKind::offshore, 0.0, {lon, lat}};
}

/// Unit whose marginal cost is `cost` €/MWh once the scenario's price for
/// mixed fuel is zero (see zero_fuel).
inline gtce::ThermalUnit thermal_at_cost(const std::string& id, const std::string& zone, double gw, double cost)
{
  gtce::ThermalUnit u;
  u.id = id;
  u.zone = zone;
  u.capacity_gw = gw;
  u.efficiency = 1.0;
  u.fuel = gtce::Fuel::mixed;
  u.emission_factor = 0.0;
  u.om_cost = cost;
  return u;
}

/// Sets the mixed-fuel price to zero so unit costs equal their O&M term.
inline gtce::Scenario zero_fuel(gtce::Scenario s)
{
  s.costs.fuel_price[gtce::Fuel::mixed] = 0.0;
  return s;
}

struct Toy {
  gtce::Scenario scenario;
  gtce::RepresentativeWeeks weeks;
};

/// Randomized toy expansion instance: at most three zones (one or two of them
/// offshore), at most three candidate arcs, at most three steps per arc,
/// two representative weeks of four steps each.
inline Toy random_toy(std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  auto uni = [&](double a, double b) { return a + (b - a) * std::generate_canonical<double, 53>(rng); };
  auto pick = [&](int a, int b) { return a + static_cast<int>(rng() % static_cast<std::uint64_t>(b - a + 1)); };

  Toy toy;
  gtce::Scenario& s = toy.scenario;
  s.name = "toy-" + std::to_string(seed);
  const int n_obz = pick(1, 2);
  const int n_ml = n_obz == 2 ? 1 : pick(1, 2);
  for (int i = 0; i < n_ml; ++i) s.zones.push_back(mainland("M" + std::to_string(i + 1), 4.0 + 3.0 * i, 53.0, pick(1, 4)));
  for (int i = 0; i < n_obz; ++i) {
    s.zones.push_back(offshore("OBZ" + std::to_string(i + 1), 5.0 + 1.5 * i, 54.5));
    s.max_available_gw["OBZ" + std::to_string(i + 1)] = pick(1, 3);
  }
  s.costs.max_steps_per_arc = 3;
  s.costs.c_owp_varP = uni(0.2, 1.2);
  s.costs.fuel_price[gtce::Fuel::mixed] = 0.0;

  std::vector<std::pair<std::string, std::string>> candidates;
  for (int f = 0; f < n_obz; ++f) {
    for (int m = 0; m < n_ml; ++m) candidates.emplace_back("OBZ" + std::to_string(f + 1), "M" + std::to_string(m + 1));
  }
  if (n_obz == 2) candidates.emplace_back("OBZ1", "OBZ2");
  std::shuffle(candidates.begin(), candidates.end(), rng);
  // keep every offshore zone reachable where possible, at most three arcs
  const std::size_t n_arcs = std::min<std::size_t>(candidates.size(), static_cast<std::size_t>(pick(1, 3)));
  for (std::size_t k = 0; k < n_arcs; ++k) {
    gtce::ArcSpec a;
    a.from = candidates[k].first;
    a.to = candidates[k].second;
    a.distance_km = std::round(uni(20.0, 150.0));
    a.onshore_share = s.is_offshore(a.to) ? 0.0 : std::round(uni(0.0, 0.3) * 100.0) / 100.0;
    s.offshore_arcs.push_back(a);
  }

  const std::size_t periods = 2, steps = 4;
  std::vector<std::pair<std::string, Profile>> series;
  for (int m = 0; m < n_ml; ++m) {
    const std::string z = "M" + std::to_string(m + 1);
    s.units.push_back(thermal_at_cost(z + "_base", z, uni(1.0, 3.0), std::round(uni(10.0, 40.0))));
    s.units.push_back(thermal_at_cost(z + "_peak", z, uni(1.0, 3.0), std::round(uni(60.0, 200.0))));
    Profile load(periods, std::vector<double>(steps));
    for (auto& row : load)
      for (auto& v : row) v = std::round(uni(1.0, 5.0) * 10.0) / 10.0;
    series.emplace_back(gtce::load_series(z), load);
  }
  for (int f = 0; f < n_obz; ++f) {
    Profile cf(periods, std::vector<double>(steps));
    for (auto& row : cf)
      for (auto& v : row) v = std::round(uni(0.0, 1.0) * 100.0) / 100.0;
    series.emplace_back(gtce::offshore_cf_series("OBZ" + std::to_string(f + 1)), cf);
  }
  if (n_ml == 2) {
    s.ntc = {{0, 1, 0}, {1, 0, 0}, {0, 0, 0}};
    s.ntc[0][1] = s.ntc[1][0] = std::round(uni(0.0, 2.0) * 10.0) / 10.0;
    if (pick(0, 1) == 1) s.corridors.push_back({"M1", "M2", 2.0, 80.0});
  }
  toy.weeks = make_weeks({26, 26}, steps, 42.0, series);
  return toy;
}

// One zone, three units on a merit order of 20/50/90 €/MWh, 1 GW each.
inline Toy merit_order(const std::vector<double>& load)
{
  Toy toy;
  gtce::Scenario& s = toy.scenario;
  s.zones = {mainland("A", 4.0, 52.0)};
  s.units = {thermal_at_cost("cheap", "A", 1.0, 20.0), thermal_at_cost("mid", "A", 1.0, 50.0),
             thermal_at_cost("dear", "A", 1.0, 90.0)};
  s = zero_fuel(s);
  toy.weeks = make_weeks({52}, load.size(), 168.0 / static_cast<double>(load.size()),
                                   {{gtce::load_series("A"), {load}}});
  return toy;
}

// A exports cheap power to B over a 1 GW line.
inline Toy congestion(double ntc)
{
  Toy toy;
  gtce::Scenario& s = toy.scenario;
  s.zones = {mainland("A", 4.0, 52.0), mainland("B", 8.0, 52.0)};
  s.ntc = {{0, ntc}, {ntc, 0}};
  s.units = {thermal_at_cost("coalA", "A", 5.0, 10.0), thermal_at_cost("gasB", "B", 5.0, 60.0)};
  s = zero_fuel(s);
  toy.weeks = make_weeks({52}, 2, 84.0,
                                   {{gtce::load_series("A"), {{1.0, 1.0}}}, {gtce::load_series("B"), {{3.0, 0.5}}}});
  return toy;
}

// Offshore park connected to A; gas in A is displaced by wind.
inline Toy displacement()
{
  Toy toy;
  gtce::Scenario& s = toy.scenario;
  s.zones = {mainland("A", 4.0, 52.0), mainland("B", 8.0, 52.0), offshore("OBZ1", 5.0, 54.5)};
  s.max_available_gw["OBZ1"] = 3.0;
  s.offshore_arcs = {{"OBZ1", "A", 100.0, 0.1}};
  s.ntc = {{0, 1, 0}, {1, 0, 0}, {0, 0, 0}};
  s.units = {thermal_at_cost("coalA", "A", 2.0, 30.0), thermal_at_cost("gasA", "A", 4.0, 80.0),
             thermal_at_cost("coalB", "B", 4.0, 35.0)};
  s = zero_fuel(s);
  toy.weeks = make_weeks({26, 26}, 4, 42.0,
                                   {{gtce::load_series("A"), {{3.0, 4.0, 5.0, 3.5}, {2.5, 4.5, 5.5, 3.0}}},
                                    {gtce::load_series("B"), constant(2, 4, 2.0)},
                                    {gtce::offshore_cf_series("OBZ1"), {{0.9, 0.5, 0.2, 0.7}, {0.1, 0.3, 1.0, 0.6}}}});
  return toy;
}

inline gtce::Topology displacement_build()
{
  gtce::Topology t;
  t.arcs = {{"OBZ1", "A", 3, true}};
  t.owp_gw["OBZ1"] = 3.0;
  t.converter_onshore_gw["A"] = 3.0;
  t.converter_offshore_gw["OBZ1"] = 3.0;
  return t;
}

}  // namespace fixtures
