#include "gtce/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <set>

#include "gtce/geo.hpp"

namespace gtce {

const char* to_string(Fuel fuel)
{
  switch (fuel) {
    case Fuel::nuclear: return "nuclear";
    case Fuel::lignite: return "lignite";
    case Fuel::hard_coal: return "hard_coal";
    case Fuel::natural_gas: return "natural_gas";
    case Fuel::mixed: return "mixed";
    case Fuel::hydro: return "hydro";
  }
  return "unknown";
}

Fuel fuel_from_string(const std::string& name)
{
  for (Fuel f : {Fuel::nuclear, Fuel::lignite, Fuel::hard_coal, Fuel::natural_gas, Fuel::mixed,
                 Fuel::hydro}) {
    if (name == to_string(f)) return f;
  }
  throw domain_error("unknown fuel '" + name + "'");
}

std::map<Fuel, double> default_emission_factors()
{
  return {{Fuel::nuclear, 0.0},     {Fuel::lignite, 0.40}, {Fuel::hard_coal, 0.34},
          {Fuel::natural_gas, 0.202}, {Fuel::mixed, 0.30},   {Fuel::hydro, 0.0}};
}

std::optional<std::size_t> Scenario::zone_index(const std::string& id) const
{
  for (std::size_t i = 0; i < zones.size(); ++i) {
    if (zones[i].id == id) return i;
  }
  return std::nullopt;
}

const Zone& Scenario::zone(const std::string& id) const
{
  auto idx = zone_index(id);
  if (!idx) throw domain_error("unknown zone '" + id + "'");
  return zones[*idx];
}

bool Scenario::is_offshore(const std::string& id) const
{
  return zone(id).kind == ZoneKind::offshore;
}

double crf(double interest, int lifetime_years)
{
  if (!(interest > 0.0) || interest >= 1.0) throw domain_error("crf: interest rate must lie in (0,1)");
  if (lifetime_years < 1) throw domain_error("crf: lifetime must be at least one year");
  const double growth = std::pow(1.0 + interest, lifetime_years);
  return interest * growth / (growth - 1.0);
}

double annualize(double capex, double crf_value, double om_rate)
{
  if (capex < 0.0) throw domain_error("annualize: capex must be non-negative");
  return capex * (crf_value + om_rate);
}

double co2_price(double base, double multiplier)
{
  if (!(base > 0.0) || !(multiplier > 0.0)) throw domain_error("co2_price: base and multiplier must be positive");
  return base * multiplier;
}

long co2_price_display(double base, double multiplier)
{
  return std::lround(co2_price(base, multiplier));
}

double marginal_cost(const ThermalUnit& unit, double fuel_price, double co2)
{
  if (!(unit.efficiency > 0.0)) throw domain_error("marginal_cost: efficiency must be > 0");
  return (fuel_price + co2 * unit.emission_factor) / unit.efficiency + unit.om_cost;
}

double marginal_cost(const ThermalUnit& unit, const CostTable& costs, double co2)
{
  auto it = costs.fuel_price.find(unit.fuel);
  const double fuel_price = it == costs.fuel_price.end() ? 0.0 : it->second;
  return marginal_cost(unit, fuel_price, co2);
}

double crf_owp(const CostTable& costs) { return crf(costs.i_owp, costs.n_owp); }
double crf_hvdc(const CostTable& costs) { return crf(costs.i_hvdc, costs.n_hvdc); }

double effective_co2(const Scenario& scenario)
{
  return co2_price(scenario.costs.c_co2, scenario.co2_multiplier);
}

namespace {

void check_costs(const CostTable& c, std::vector<std::string>& out)
{
  const std::pair<const char*, double> nonneg[] = {
      {"c_b_fix", c.c_b_fix},         {"c_b_on_varL", c.c_b_on_varL},
      {"c_b_off_varL", c.c_b_off_varL}, {"c_b_on_varLP", c.c_b_on_varLP},
      {"c_b_off_varLP", c.c_b_off_varLP}, {"c_c_fix", c.c_c_fix},
      {"c_c_varP_acdc", c.c_c_varP_acdc}, {"c_c_varP_dcdc", c.c_c_varP_dcdc},
      {"c_hvdc_varOM", c.c_hvdc_varOM}, {"c_ntc_varL", c.c_ntc_varL},
      {"c_ntc_varLP", c.c_ntc_varLP},   {"c_owp_varP", c.c_owp_varP},
      {"c_owp_varOM", c.c_owp_varOM},   {"c_co2", c.c_co2},
      {"voll", c.voll}};
  for (const auto& [name, value] : nonneg) {
    if (!(value >= 0.0)) out.push_back(std::string("CostTable ") + name + " must be >= 0");
  }
  for (const auto& [fuel, price] : c.fuel_price) {
    if (!(price >= 0.0)) out.push_back(std::string("CostTable fuel price must be >= 0 (") + to_string(fuel) + ")");
  }
  if (!(c.i_owp > 0.0 && c.i_owp < 1.0)) out.push_back("CostTable i_owp must lie in (0,1)");
  if (!(c.i_hvdc > 0.0 && c.i_hvdc < 1.0)) out.push_back("CostTable i_hvdc must lie in (0,1)");
  if (c.n_owp < 1) out.push_back("CostTable n_owp must be >= 1");
  if (c.n_hvdc < 1) out.push_back("CostTable n_hvdc must be >= 1");
  if (c.c_c_varP_dcdc > c.c_c_varP_acdc) out.push_back("CostTable c_c_varP_dcdc must not exceed c_c_varP_acdc");
  if (!(c.rho_owp > 0.0)) out.push_back("CostTable rho_owp must be > 0");
  if (!(c.step_gw > 0.0)) out.push_back("CostTable step size must be > 0");
  if (!(c.landing_cap_gw > 0.0)) out.push_back("CostTable landing cap must be > 0");
  if (c.max_steps_per_arc < 0) out.push_back("CostTable max_steps_per_arc must be >= 0");
  if (!(c.hydro_availability >= 0.0 && c.hydro_availability <= 1.0))
    out.push_back("CostTable hydro_availability must lie in [0,1]");
}

}  // namespace

std::vector<std::string> validate(const Scenario& s)
{
  std::vector<std::string> out;
  std::set<std::string> ids;
  for (const auto& z : s.zones) {
    if (!ids.insert(z.id).second) out.push_back("Zone id duplicated: " + z.id);
    if (z.kind == ZoneKind::offshore && s.load.count(z.id))
      out.push_back("Zone " + z.id + ": offshore zones carry no native demand");
    if (z.kind == ZoneKind::offshore && !s.sites.empty())
      out.push_back("Zone " + z.id + ": explicit offshore zones cannot be combined with candidate sites");
  }

  std::set<std::string> landing_zones;
  for (const auto& arc : s.offshore_arcs) {
    const bool from_ok = s.zone_index(arc.from).has_value();
    const bool to_ok = s.zone_index(arc.to).has_value();
    if (!from_ok || !to_ok) {
      out.push_back("Arc " + arc.from + "–" + arc.to + ": unknown zone");
      continue;
    }
    const bool off_from = s.is_offshore(arc.from);
    const bool off_to = s.is_offshore(arc.to);
    if (!off_from && !off_to) out.push_back("Arc " + arc.from + "–" + arc.to + ": offshore arc needs an offshore end");
    if (!off_from) landing_zones.insert(arc.from);
    if (!off_to) landing_zones.insert(arc.to);
    if (arc.onshore_share && !(*arc.onshore_share >= 0.0 && *arc.onshore_share <= 1.0))
      out.push_back("Arc " + arc.from + "–" + arc.to + ": onshore share must lie in [0,1]");
    if (arc.distance_km && !(*arc.distance_km >= 0.0))
      out.push_back("Arc " + arc.from + "–" + arc.to + ": distance must be >= 0");
  }
  std::set<std::pair<std::string, std::string>> seen_arcs;
  for (const auto& arc : s.offshore_arcs) {
    auto key = std::minmax(arc.from, arc.to);
    if (arc.from == arc.to) out.push_back("Arc " + arc.from + "–" + arc.to + ": self loop");
    if (!seen_arcs.insert({key.first, key.second}).second)
      out.push_back("Arc " + arc.from + "–" + arc.to + ": duplicated (mask must be symmetric)");
  }
  if (!s.sites.empty()) {
    for (const auto& id : s.arc_rule.mainland) landing_zones.insert(id);
  }
  for (const auto& id : landing_zones) {
    auto idx = s.zone_index(id);
    if (!idx) {
      out.push_back("Zone " + id + ": unknown landing zone");
      continue;
    }
    if (!(s.zones[*idx].landing_cap_gw > 0.0))
      out.push_back("Zone " + id + ": landing_cap must be > 0 for zones with offshore connections");
  }

  for (const auto& u : s.units) {
    if (!s.zone_index(u.zone)) out.push_back("ThermalUnit " + u.id + ": unknown zone " + u.zone);
    else if (s.is_offshore(u.zone)) out.push_back("ThermalUnit " + u.id + ": located in offshore zone");
    if (!(u.capacity_gw >= 0.0)) out.push_back("ThermalUnit capacity must be >= 0 (" + u.id + ")");
    if (!(u.efficiency > 0.0)) out.push_back("ThermalUnit efficiency must be > 0 (" + u.id + ")");
    else if (u.efficiency > 1.0) out.push_back("ThermalUnit efficiency must be <= 1 (" + u.id + ")");
    if (!(u.emission_factor >= 0.0)) out.push_back("ThermalUnit emission factor must be >= 0 (" + u.id + ")");
  }

  check_costs(s.costs, out);

  for (const auto& site : s.sites) {
    if (!(site.power_density > 0.0)) out.push_back("CandidateSite " + site.id + ": power density must be > 0");
    if (site.polygon.size() < 3) out.push_back("CandidateSite " + site.id + ": polygon needs at least 3 vertices");
    else if (!is_simple_polygon(site.polygon))
      out.push_back("CandidateSite " + site.id + ": polygon self-intersects");
  }

  std::optional<std::size_t> length;
  for (const auto& [zone, series] : s.load) {
    if (!s.zone_index(zone)) out.push_back("Load series for unknown zone " + zone);
    if (length && series.size() != *length) out.push_back("Load series length mismatch (" + zone + ")");
    length = length.value_or(series.size());
    for (double v : series) {
      if (!std::isfinite(v) || v < 0.0) {
        out.push_back("Load series " + zone + " must be finite and >= 0");
        break;
      }
    }
  }

  const std::size_t n = s.zones.size();
  if (!s.ntc.empty()) {
    bool shape_ok = s.ntc.size() == n;
    for (const auto& row : s.ntc) shape_ok = shape_ok && row.size() == n;
    if (!shape_ok) {
      out.push_back("NTC matrix must be square with one row per zone");
    } else {
      for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
          if (s.ntc[a][b] < 0.0) out.push_back("NTC negative " + s.zones[a].id + "–" + s.zones[b].id);
          if (b > a && s.ntc[a][b] != s.ntc[b][a])
            out.push_back("NTC asymmetry " + s.zones[a].id + "–" + s.zones[b].id);
          if (s.ntc[a][b] > 0.0 && (s.zones[a].kind == ZoneKind::offshore || s.zones[b].kind == ZoneKind::offshore))
            out.push_back("NTC between offshore zones must be expressed as arcs (" + s.zones[a].id + "–" + s.zones[b].id + ")");
        }
      }
    }
  }

  for (const auto& c : s.corridors) {
    if (!s.zone_index(c.from) || !s.zone_index(c.to)) {
      out.push_back("Corridor " + c.from + "–" + c.to + ": unknown zone");
      continue;
    }
    if (s.is_offshore(c.from) || s.is_offshore(c.to))
      out.push_back("Corridor " + c.from + "–" + c.to + ": corridors join mainland zones");
    if (!(c.max_added_gw >= 0.0)) out.push_back("Corridor " + c.from + "–" + c.to + ": max added capacity must be >= 0");
  }

  for (const auto& [zone, cap] : s.max_available_gw) {
    if (!s.zone_index(zone) || !s.is_offshore(zone)) out.push_back("Available capacity for non-offshore zone " + zone);
    if (!(cap >= 0.0)) out.push_back("Available capacity must be >= 0 (" + zone + ")");
  }

  if (!(s.co2_multiplier > 0.0)) out.push_back("CO2 multiplier must be > 0");
  return out;
}

std::uint64_t fnv1a(const std::string& data, std::uint64_t seed)
{
  std::uint64_t h = seed;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t value)
{
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace gtce
