#include "gtce/expansion_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gtce/format.hpp"

namespace gtce {

double cable_cost_varL(const ArcGeometry& arc, const CostTable& costs)
{
  return arc.distance_km * arc.onshore_share * costs.c_b_on_varL +
         arc.distance_km * arc.offshore_share * costs.c_b_off_varL;
}

double cable_cost_varLP(const ArcGeometry& arc, const CostTable& costs)
{
  return arc.distance_km * arc.onshore_share * costs.c_b_on_varLP +
         arc.distance_km * arc.offshore_share * costs.c_b_off_varLP;
}

std::string sanitize(const std::string& id)
{
  std::string out = id;
  for (char& c : out) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') c = '_';
  }
  return out;
}

std::string load_series(const std::string& zone) { return "load:" + zone; }
std::string offshore_cf_series(const std::string& zone) { return "cf:" + zone; }
std::string fleet_cf_series(const std::string& zone, const std::string& technology)
{
  return "cf:" + zone + ":" + technology;
}

Scenario with_offshore_zones(const Scenario& scenario, const std::vector<ConverterCluster>& clusters,
                             const std::string& prefix)
{
  Scenario out = scenario;
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    Zone z;
    z.id = prefix + std::to_string(k + 1);
    if (out.zone_index(z.id)) throw domain_error("Zone id duplicated: " + z.id);
    z.kind = ZoneKind::offshore;
    z.location = clusters[k].medoid;
    out.zones.push_back(z);
    out.max_available_gw[z.id] = clusters[k].pooled_gw;
  }
  if (!out.ntc.empty()) {
    for (auto& row : out.ntc) row.resize(out.zones.size(), 0.0);
    out.ntc.resize(out.zones.size(), std::vector<double>(out.zones.size(), 0.0));
  }
  return out;
}

namespace {

double landing_cap(const Scenario& s, const Zone& z)
{
  return z.landing_cap_gw > 0.0 ? z.landing_cap_gw : s.costs.landing_cap_gw;
}

double available(const Scenario& s, const std::string& zone)
{
  auto it = s.max_available_gw.find(zone);
  return it == s.max_available_gw.end() ? 0.0 : it->second;
}

}  // namespace

std::vector<ArcGeometry> offshore_arcs(const Scenario& scenario)
{
  std::vector<ArcGeometry> out;
  auto geometry = [&](const std::string& a, const std::string& b, std::optional<double> distance,
                      std::optional<double> onshore_share) {
    ArcGeometry g;
    g.from = a;
    g.to = b;
    const Zone& za = scenario.zone(a);
    const Zone& zb = scenario.zone(b);
    g.distance_km = distance ? *distance : haversine(za.location, zb.location);
    if (onshore_share) {
      g.onshore_share = *onshore_share;
    } else if (za.kind == ZoneKind::offshore && zb.kind == ZoneKind::offshore) {
      g.onshore_share = 0.0;
    } else {
      g.onshore_share = g.distance_km > 0.0 ? std::min(1.0, scenario.arc_rule.onshore_tail_km / g.distance_km) : 0.0;
    }
    g.offshore_share = 1.0 - g.onshore_share;
    return g;
  };

  if (!scenario.offshore_arcs.empty()) {
    for (const auto& a : scenario.offshore_arcs) out.push_back(geometry(a.from, a.to, a.distance_km, a.onshore_share));
    return out;
  }
  const auto& rule = scenario.arc_rule;
  std::vector<const Zone*> offshore, mainland;
  for (const auto& z : scenario.zones) {
    if (z.kind == ZoneKind::offshore) {
      offshore.push_back(&z);
    } else if (rule.mainland.empty() ||
               std::find(rule.mainland.begin(), rule.mainland.end(), z.id) != rule.mainland.end()) {
      mainland.push_back(&z);
    }
  }
  for (std::size_t i = 0; i < offshore.size(); ++i) {
    for (const Zone* m : mainland) {
      auto g = geometry(offshore[i]->id, m->id, std::nullopt, std::nullopt);
      if (g.distance_km <= rule.max_length_km) out.push_back(g);
    }
    if (!rule.offshore_to_offshore) continue;
    for (std::size_t j = i + 1; j < offshore.size(); ++j) {
      auto g = geometry(offshore[i]->id, offshore[j]->id, std::nullopt, std::nullopt);
      if (g.distance_km <= rule.max_length_km) out.push_back(g);
    }
  }
  return out;
}

std::vector<OnshoreLink> onshore_links(const Scenario& scenario)
{
  std::vector<OnshoreLink> out;
  const std::size_t n = scenario.zones.size();
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  for (std::size_t a = 0; a < n && !scenario.ntc.empty(); ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (scenario.ntc[a][b] <= 0.0) continue;
      if (scenario.zones[a].kind == ZoneKind::offshore || scenario.zones[b].kind == ZoneKind::offshore) continue;
      OnshoreLink l;
      l.from = scenario.zones[a].id;
      l.to = scenario.zones[b].id;
      l.existing_gw = scenario.ntc[a][b];
      l.distance_km = haversine(scenario.zones[a].location, scenario.zones[b].location);
      index[{a, b}] = out.size();
      out.push_back(l);
    }
  }
  for (const auto& c : scenario.corridors) {
    std::size_t a = *scenario.zone_index(c.from), b = *scenario.zone_index(c.to);
    const bool swapped = a > b;
    if (swapped) std::swap(a, b);
    auto it = index.find({a, b});
    if (it == index.end()) {
      OnshoreLink l;
      l.from = scenario.zones[a].id;
      l.to = scenario.zones[b].id;
      l.distance_km = haversine(scenario.zones[a].location, scenario.zones[b].location);
      it = index.emplace(std::make_pair(a, b), out.size()).first;
      out.push_back(l);
    }
    OnshoreLink& l = out[it->second];
    l.expandable = true;
    l.max_added_gw = c.max_added_gw;
    if (c.distance_km) l.distance_km = *c.distance_km;
  }
  std::stable_sort(out.begin(), out.end(), [&](const OnshoreLink& x, const OnshoreLink& y) {
    const auto kx = std::make_pair(*scenario.zone_index(x.from), *scenario.zone_index(x.to));
    const auto ky = std::make_pair(*scenario.zone_index(y.from), *scenario.zone_index(y.to));
    return kx < ky;
  });
  return out;
}

double Topology::total_owp_gw() const
{
  double s = 0.0;
  for (const auto& [id, gw] : owp_gw) s += gw;
  return s;
}

int Topology::built_arcs() const
{
  int n = 0;
  for (const auto& a : arcs) n += a.built ? 1 : 0;
  return n;
}

std::size_t ExpansionModel::zone_index(const std::string& id) const
{
  auto it = std::find(zones.begin(), zones.end(), id);
  if (it == zones.end()) throw domain_error("unknown zone " + id);
  return static_cast<std::size_t>(it - zones.begin());
}

std::map<std::string, std::size_t> ExpansionModel::tag_census() const
{
  std::map<std::string, std::size_t> out;
  for (const auto& r : lp.rows()) ++out[r.tag];
  return out;
}

namespace {

using Grid = std::vector<std::vector<std::size_t>>;

Grid make_grid(std::size_t periods, std::size_t steps, std::size_t fill = ExpansionModel::npos)
{
  return Grid(periods, std::vector<std::size_t>(steps, fill));
}

struct Annuities {
  double crf_h;
  double om_h;
  double crf_o;
  double om_o;
};

Annuities annuities(const CostTable& c) { return {crf_hvdc(c), c.c_hvdc_varOM, crf_owp(c), c.c_owp_varOM}; }

// Objective coefficient of the directed step variable NTC_{a,b} of `arc`.
double ntc_coefficient(const ExpansionModel& m, std::size_t arc)
{
  const auto& c = m.costs;
  const auto an = annuities(c);
  const bool dcdc = m.is_offshore(m.zone_index(m.arcs[arc].from)) && m.is_offshore(m.zone_index(m.arcs[arc].to));
  double v = c.step_gw * cable_cost_varLP(m.arcs[arc], c) / 2.0 * (an.crf_h + an.om_h);
  if (dcdc) v += c.step_gw * c.c_c_varP_dcdc / 2.0 * (an.crf_h + an.om_h);
  return v;
}

// Objective coefficient of the directed adjacency A_{a,b} with `a` the first index.
double adjacency_coefficient(const ExpansionModel& m, std::size_t arc, bool first_is_offshore)
{
  const auto& c = m.costs;
  const auto an = annuities(c);
  double v = c.c_b_fix / 2.0 * an.crf_h + cable_cost_varL(m.arcs[arc], c) / 2.0 * an.crf_h;
  if (first_is_offshore) v += c.c_c_fix / 2.0 * (an.crf_h + an.om_h);
  return v;
}

const Topology::Arc* find_arc(const Topology& t, const std::string& a, const std::string& b)
{
  for (const auto& arc : t.arcs) {
    if ((arc.from == a && arc.to == b) || (arc.from == b && arc.to == a)) return &arc;
  }
  return nullptr;
}

const Topology::Corridor* find_corridor(const Topology& t, const std::string& a, const std::string& b)
{
  for (const auto& c : t.corridors) {
    if ((c.from == a && c.to == b) || (c.from == b && c.to == a)) return &c;
  }
  return nullptr;
}

double lookup(const std::map<std::string, double>& m, const std::string& key)
{
  auto it = m.find(key);
  return it == m.end() ? 0.0 : it->second;
}

}  // namespace

ExpansionModel build_model(const Scenario& scenario, const std::vector<ConverterCluster>& clusters,
                           const RepresentativeWeeks& weeks, const ExpansionOptions& options)
{
  return build_model(with_offshore_zones(scenario, clusters), weeks, options);
}

ExpansionModel build_model(const Scenario& scenario, const RepresentativeWeeks& weeks,
                           const ExpansionOptions& options)
{
  ExpansionModel m;
  m.costs = scenario.costs;
  const CostTable& c = m.costs;
  const auto an = annuities(c);
  const double s = c.step_gw;

  for (const auto& z : scenario.zones) {
    if (z.kind == ZoneKind::mainland) {
      m.zones.push_back(z.id);
      m.offshore.push_back(false);
    }
  }
  if (options.allow_offshore) {
    for (const auto& z : scenario.zones) {
      if (z.kind == ZoneKind::offshore) {
        m.zones.push_back(z.id);
        m.offshore.push_back(true);
      }
    }
  }
  const std::size_t nz = m.zones.size();

  if (options.only_period) {
    if (*options.only_period >= weeks.periods()) throw domain_error("period index out of range");
    m.periods = {*options.only_period};
    m.weights = {1.0};
  } else {
    for (std::size_t p = 0; p < weeks.periods(); ++p) {
      m.periods.push_back(p);
      m.weights.push_back(weeks.weights[p]);
    }
  }
  if (m.periods.empty()) throw domain_error("representative weeks contain no period");
  m.steps = weeks.steps;
  m.hours_per_step = weeks.hours_per_step;
  const std::size_t np = m.periods.size(), nt = m.steps;
  const double dt = m.hours_per_step;

  auto series = [&](const std::string& name) {
    std::vector<std::vector<double>> out;
    for (std::size_t p : m.periods) out.push_back(weeks.profile(p, name));
    return out;
  };
  auto zeros = [&] { return std::vector<std::vector<double>>(np, std::vector<double>(nt, 0.0)); };

  // Exogenous series.
  for (std::size_t zi = 0; zi < nz; ++zi) {
    const std::string& z = m.zones[zi];
    if (!m.offshore[zi]) {
      if (weeks.has_series(load_series(z))) m.load[z] = series(load_series(z));
      else if (scenario.load.count(z)) throw domain_error("representative weeks lack series " + load_series(z));
      else m.load[z] = zeros();
      auto avail = zeros();
      auto it = scenario.renewables.find(z);
      if (it != scenario.renewables.end()) {
        const std::pair<const char*, double> fleet[] = {{"wind_on", it->second.onshore_wind_gw},
                                                        {"wind_off", it->second.offshore_wind_gw},
                                                        {"pv", it->second.pv_gw}};
        for (const auto& [tech, gw] : fleet) {
          if (gw <= 0.0) continue;
          const std::string name = fleet_cf_series(z, tech);
          if (!weeks.has_series(name)) throw domain_error("representative weeks lack series " + name);
          const auto cf = series(name);
          for (std::size_t p = 0; p < np; ++p)
            for (std::size_t t = 0; t < nt; ++t) avail[p][t] += gw * cf[p][t];
        }
      }
      m.res_available[z] = avail;
    } else {
      if (weeks.has_series(offshore_cf_series(z))) m.owp_cf[z] = series(offshore_cf_series(z));
      else if (available(scenario, z) > 0.0) throw domain_error("representative weeks lack series " + offshore_cf_series(z));
      else m.owp_cf[z] = zeros();
    }
  }

  // Topology candidates.
  if (options.allow_offshore) {
    for (const auto& a : offshore_arcs(scenario)) m.arcs.push_back(a);
  }
  for (auto l : onshore_links(scenario)) {
    if (!options.allow_onshore_expansion) {
      if (l.existing_gw <= 0.0) {
        // an unexpanded corridor without existing capacity carries nothing
        if (!options.fixed) continue;
      }
      if (!options.fixed) {
        l.expandable = false;
        l.max_added_gw = 0.0;
      }
    }
    m.links.push_back(l);
  }
  const std::size_t na = m.arcs.size(), nl = m.links.size();

  std::vector<double> cap_ml(nz, 0.0);
  for (std::size_t zi = 0; zi < nz; ++zi) {
    if (!m.offshore[zi]) cap_ml[zi] = landing_cap(scenario, scenario.zone(m.zones[zi]));
  }
  m.landing_cap_gw = cap_ml;
  for (std::size_t k = 0; k < na; ++k) {
    const std::size_t a = m.zone_index(m.arcs[k].from), b = m.zone_index(m.arcs[k].to);
    double bound = c.max_steps_per_arc * s;
    if (m.offshore[a] && m.offshore[b]) {
      bound = std::min(bound, std::max(available(scenario, m.zones[a]), available(scenario, m.zones[b])));
    } else {
      const std::size_t obz = m.offshore[a] ? a : b, ml = m.offshore[a] ? b : a;
      bound = std::min({bound, available(scenario, m.zones[obz]), cap_ml[ml]});
    }
    m.big_m.push_back(static_cast<int>(std::ceil(bound / s - 1e-9)));
  }
  if (options.fixed) {
    for (std::size_t k = 0; k < na; ++k) {
      if (const auto* fa = find_arc(*options.fixed, m.arcs[k].from, m.arcs[k].to))
        m.big_m[k] = std::max(m.big_m[k], fa->steps);
    }
  }

  // Units.
  const double co2 = effective_co2(scenario);
  for (const auto& u : scenario.units) {
    if (!scenario.zone_index(u.zone)) continue;
    m.units.push_back(u);
    m.unit_cost.push_back(marginal_cost(u, c, co2));
  }
  const std::size_t nu = m.units.size();

  LinearModel& lp = m.lp;
  const auto npos = ExpansionModel::npos;
  auto suffix = [&](std::size_t p, std::size_t t) {
    return "_w" + std::to_string(m.periods[p]) + "_t" + std::to_string(t);
  };

  // Which zones touch offshore arcs.
  std::vector<std::vector<std::pair<std::size_t, int>>> arcs_at(nz);  // (arc, dir leaving the zone)
  for (std::size_t k = 0; k < na; ++k) {
    arcs_at[m.zone_index(m.arcs[k].from)].emplace_back(k, 0);
    arcs_at[m.zone_index(m.arcs[k].to)].emplace_back(k, 1);
  }
  auto other_end = [&](std::size_t k, int dir_out) {
    return m.zone_index(dir_out == 0 ? m.arcs[k].to : m.arcs[k].from);
  };
  std::vector<bool> landing(nz, false), obz_has_ml(nz, false);
  for (std::size_t zi = 0; zi < nz; ++zi) {
    for (const auto& [k, d] : arcs_at[zi]) {
      const std::size_t o = other_end(k, d);
      if (!m.offshore[zi] && m.offshore[o]) landing[zi] = true;
      if (m.offshore[zi] && !m.offshore[o]) obz_has_ml[zi] = true;
    }
  }

  // Investment variables.
  m.pmax_var.assign(nz, npos);
  m.conv_on_var.assign(nz, npos);
  m.conv_off_var.assign(nz, npos);
  for (std::size_t zi = 0; zi < nz; ++zi) {
    if (!m.offshore[zi]) continue;
    const double avail = available(scenario, m.zones[zi]);
    m.pmax_var[zi] = lp.add_var("Pmax_" + sanitize(m.zones[zi]), 0.0, avail,
                                c.c_owp_varP * 1000.0 * (an.crf_o + an.om_o));
  }
  for (std::size_t zi = 0; zi < nz; ++zi) {
    if (m.offshore[zi] || !landing[zi]) continue;
    m.conv_on_var[zi] = lp.add_var("Pon_" + sanitize(m.zones[zi]), 0.0, cap_ml[zi],
                                   c.c_c_varP_acdc / 2.0 * (an.crf_h + an.om_h));
  }
  for (std::size_t zi = 0; zi < nz; ++zi) {
    if (!m.offshore[zi] || !obz_has_ml[zi]) continue;
    double ub = 0.0;
    for (const auto& [k, d] : arcs_at[zi]) {
      if (!m.offshore[other_end(k, d)]) ub += m.big_m[k] * s;
    }
    m.conv_off_var[zi] = lp.add_var("Poff_" + sanitize(m.zones[zi]), 0.0, ub,
                                    c.c_c_varP_acdc / 2.0 * (an.crf_h + an.om_h));
  }
  m.ntc_var.resize(na);
  m.adj_var.resize(na);
  for (std::size_t k = 0; k < na; ++k) {
    const std::string ab = sanitize(m.arcs[k].from) + "_" + sanitize(m.arcs[k].to);
    const std::string ba = sanitize(m.arcs[k].to) + "_" + sanitize(m.arcs[k].from);
    const double coef = ntc_coefficient(m, k);
    m.ntc_var[k][0] = lp.add_var("NTC_" + ab, 0.0, m.big_m[k], coef, VarType::integer);
    m.ntc_var[k][1] = lp.add_var("NTC_" + ba, 0.0, m.big_m[k], coef, VarType::integer);
    const bool from_off = m.offshore[m.zone_index(m.arcs[k].from)];
    const bool to_off = m.offshore[m.zone_index(m.arcs[k].to)];
    m.adj_var[k][0] = lp.add_var("A_" + ab, 0.0, 1.0, adjacency_coefficient(m, k, from_off), VarType::binary);
    m.adj_var[k][1] = lp.add_var("A_" + ba, 0.0, 1.0, adjacency_coefficient(m, k, to_off), VarType::binary);
  }
  m.corridor_var.assign(nl, npos);
  m.added_var.assign(nl, npos);
  for (std::size_t l = 0; l < nl; ++l) {
    if (!m.links[l].expandable) continue;
    const std::string ab = sanitize(m.links[l].from) + "_" + sanitize(m.links[l].to);
    const double d = m.links[l].distance_km;
    m.corridor_var[l] = lp.add_var("Bntc_" + ab, 0.0, 1.0, c.c_ntc_varL * d * an.crf_h, VarType::binary);
    m.added_var[l] = lp.add_var("Xntc_" + ab, 0.0, m.links[l].max_added_gw, c.c_ntc_varLP * d * an.crf_h);
  }

  // Investment rows.
  for (std::size_t zi = 0; zi < nz; ++zi) {
    if (m.pmax_var[zi] == npos) continue;
    lp.add_row("maxavail_" + sanitize(m.zones[zi]), "eq:Production_OBZ_maxAvailable", {{m.pmax_var[zi], 1.0}},
               RowSense::le, available(scenario, m.zones[zi]));
  }
  for (std::size_t k = 0; k < na; ++k) {
    const std::string ab = sanitize(m.arcs[k].from) + "_" + sanitize(m.arcs[k].to);
    const std::string ba = sanitize(m.arcs[k].to) + "_" + sanitize(m.arcs[k].from);
    lp.add_row("ntcsym_" + ab, "eq:NTC_max_hin_zurueck", {{m.ntc_var[k][0], 1.0}, {m.ntc_var[k][1], -1.0}},
               RowSense::eq, 0.0);
    lp.add_row("adjsym_" + ab, "plumbing", {{m.adj_var[k][0], 1.0}, {m.adj_var[k][1], -1.0}}, RowSense::eq, 0.0);
    // NTC_{m1,m2} <= M * A_{m2,m1}
    lp.add_row("bigM_" + ab, "eq:Adjazenz_bigM",
               {{m.ntc_var[k][0], 1.0}, {m.adj_var[k][1], -static_cast<double>(m.big_m[k])}}, RowSense::le, 0.0);
    lp.add_row("bigM_" + ba, "eq:Adjazenz_bigM",
               {{m.ntc_var[k][1], 1.0}, {m.adj_var[k][0], -static_cast<double>(m.big_m[k])}}, RowSense::le, 0.0);
  }
  for (std::size_t l = 0; l < nl; ++l) {
    if (m.corridor_var[l] == npos) continue;
    lp.add_row("corr_" + sanitize(m.links[l].from) + "_" + sanitize(m.links[l].to), "plumbing",
               {{m.added_var[l], 1.0}, {m.corridor_var[l], -m.links[l].max_added_gw}}, RowSense::le, 0.0);
  }

  // Operational variables.
  m.unit_var.assign(nu, make_grid(np, nt));
  m.res_var.assign(nz, make_grid(np, nt));
  m.shed_var.assign(nz, make_grid(np, nt));
  m.owp_var.assign(nz, make_grid(np, nt));
  m.nex_var.assign(nz, make_grid(np, nt));
  m.balance_row.assign(nz, make_grid(np, nt));
  m.arc_flow.assign(na, {make_grid(np, nt), make_grid(np, nt)});
  m.link_flow.assign(nl, {make_grid(np, nt), make_grid(np, nt)});

  std::vector<double> nex_bound(nz, 0.0);
  for (std::size_t k = 0; k < na; ++k) {
    nex_bound[m.zone_index(m.arcs[k].from)] += m.big_m[k] * s;
    nex_bound[m.zone_index(m.arcs[k].to)] += m.big_m[k] * s;
  }
  for (std::size_t l = 0; l < nl; ++l) {
    const double cap = m.links[l].existing_gw + m.links[l].max_added_gw;
    nex_bound[m.zone_index(m.links[l].from)] += cap;
    nex_bound[m.zone_index(m.links[l].to)] += cap;
  }

  for (std::size_t p = 0; p < np; ++p) {
    const double w = m.weights[p];
    for (std::size_t t = 0; t < nt; ++t) {
      const std::string sx = suffix(p, t);
      for (std::size_t u = 0; u < nu; ++u) {
        m.unit_var[u][p][t] = lp.add_var("P_" + sanitize(m.units[u].id) + sx, 0.0, m.units[u].capacity_gw,
                                         w * dt * 1e-3 * m.unit_cost[u]);
      }
      for (std::size_t zi = 0; zi < nz; ++zi) {
        const std::string& z = m.zones[zi];
        if (!m.offshore[zi]) {
          const double avail = m.res_available[z][p][t];
          if (avail > 0.0) m.res_var[zi][p][t] = lp.add_var("RES_" + sanitize(z) + sx, 0.0, avail);
          const double load = m.load[z][p][t];
          if (options.allow_lost_load && load > 0.0)
            m.shed_var[zi][p][t] = lp.add_var("LL_" + sanitize(z) + sx, 0.0, load, w * dt * 1e-3 * c.voll);
        } else {
          m.owp_var[zi][p][t] = lp.add_var("OWP_" + sanitize(z) + sx, 0.0, available(scenario, z));
        }
        m.nex_var[zi][p][t] = lp.add_var("NEx_" + sanitize(z) + sx, -nex_bound[zi], nex_bound[zi]);
      }
      for (std::size_t k = 0; k < na; ++k) {
        const std::string ab = sanitize(m.arcs[k].from) + "_" + sanitize(m.arcs[k].to);
        const std::string ba = sanitize(m.arcs[k].to) + "_" + sanitize(m.arcs[k].from);
        m.arc_flow[k][0][p][t] = lp.add_var("F_" + ab + sx, 0.0, m.big_m[k] * s);
        m.arc_flow[k][1][p][t] = lp.add_var("F_" + ba + sx, 0.0, m.big_m[k] * s);
      }
      for (std::size_t l = 0; l < nl; ++l) {
        const std::string ab = sanitize(m.links[l].from) + "_" + sanitize(m.links[l].to);
        const std::string ba = sanitize(m.links[l].to) + "_" + sanitize(m.links[l].from);
        const double cap = m.links[l].existing_gw + m.links[l].max_added_gw;
        m.link_flow[l][0][p][t] = lp.add_var("F_" + ab + sx, 0.0, cap);
        m.link_flow[l][1][p][t] = lp.add_var("F_" + ba + sx, 0.0, cap);
      }
    }
  }

  // Operational rows.
  for (std::size_t p = 0; p < np; ++p) {
    for (std::size_t t = 0; t < nt; ++t) {
      const std::string sx = suffix(p, t);
      for (std::size_t zi = 0; zi < nz; ++zi) {
        if (!m.offshore[zi]) continue;
        const double cf = m.owp_cf[m.zones[zi]][p][t];
        lp.add_row("prod_" + sanitize(m.zones[zi]) + sx, "eq:Production_OBZ",
                   {{m.owp_var[zi][p][t], 1.0}, {m.pmax_var[zi], -cf}}, RowSense::le, 0.0);
      }
      for (std::size_t k = 0; k < na; ++k) {
        for (int d = 0; d < 2; ++d) {
          const std::string& from = d == 0 ? m.arcs[k].from : m.arcs[k].to;
          const std::string& to = d == 0 ? m.arcs[k].to : m.arcs[k].from;
          const bool from_off = m.offshore[m.zone_index(from)];
          lp.add_row("fcap_" + sanitize(from) + "_" + sanitize(to) + sx,
                     from_off ? "eq:Pexport_hin_OBZ" : "eq:Pexport_zurueck_OBZ",
                     {{m.arc_flow[k][d][p][t], 1.0}, {m.ntc_var[k][d], -s}}, RowSense::le, 0.0);
        }
      }
      for (std::size_t l = 0; l < nl; ++l) {
        if (m.added_var[l] == npos) continue;
        for (int d = 0; d < 2; ++d) {
          const std::string& from = d == 0 ? m.links[l].from : m.links[l].to;
          const std::string& to = d == 0 ? m.links[l].to : m.links[l].from;
          lp.add_row("lnk_" + sanitize(from) + "_" + sanitize(to) + sx, "plumbing",
                     {{m.link_flow[l][d][p][t], 1.0}, {m.added_var[l], -1.0}}, RowSense::le, m.links[l].existing_gw);
        }
      }
      for (std::size_t zi = 0; zi < nz; ++zi) {
        // net export bookkeeping for every zone
        std::vector<Term> terms{{m.nex_var[zi][p][t], 1.0}};
        for (std::size_t k = 0; k < na; ++k) {
          const std::size_t a = m.zone_index(m.arcs[k].from), b = m.zone_index(m.arcs[k].to);
          if (a == zi) {
            terms.push_back({m.arc_flow[k][0][p][t], -1.0});
            terms.push_back({m.arc_flow[k][1][p][t], 1.0});
          } else if (b == zi) {
            terms.push_back({m.arc_flow[k][1][p][t], -1.0});
            terms.push_back({m.arc_flow[k][0][p][t], 1.0});
          }
        }
        for (std::size_t l = 0; l < nl; ++l) {
          const std::size_t a = m.zone_index(m.links[l].from), b = m.zone_index(m.links[l].to);
          if (a == zi) {
            terms.push_back({m.link_flow[l][0][p][t], -1.0});
            terms.push_back({m.link_flow[l][1][p][t], 1.0});
          } else if (b == zi) {
            terms.push_back({m.link_flow[l][1][p][t], -1.0});
            terms.push_back({m.link_flow[l][0][p][t], 1.0});
          }
        }
        lp.add_row("pnetto_" + sanitize(m.zones[zi]) + sx, "eq:P_netto", std::move(terms), RowSense::eq, 0.0);
      }
      for (std::size_t zi = 0; zi < nz; ++zi) {
        const std::string& z = m.zones[zi];
        if (m.offshore[zi]) {
          m.balance_row[zi][p][t] = lp.add_row("bal_" + sanitize(z) + sx, "eq:LeistungsGG",
                                               {{m.owp_var[zi][p][t], 1.0}, {m.nex_var[zi][p][t], -1.0}},
                                               RowSense::eq, 0.0);
          continue;
        }
        std::vector<Term> terms;
        for (std::size_t u = 0; u < nu; ++u) {
          if (m.units[u].zone == z) terms.push_back({m.unit_var[u][p][t], 1.0});
        }
        if (m.res_var[zi][p][t] != npos) terms.push_back({m.res_var[zi][p][t], 1.0});
        if (m.shed_var[zi][p][t] != npos) terms.push_back({m.shed_var[zi][p][t], 1.0});
        terms.push_back({m.nex_var[zi][p][t], -1.0});
        m.balance_row[zi][p][t] =
            lp.add_row("bal_" + sanitize(z) + sx, "plumbing", std::move(terms), RowSense::eq, m.load[z][p][t]);
      }
      for (std::size_t zi = 0; zi < nz; ++zi) {
        if (m.offshore[zi] || !landing[zi]) continue;
        std::vector<Term> in, out;  // OBZ -> zone, zone -> OBZ
        for (const auto& [k, d] : arcs_at[zi]) {
          if (!m.offshore[other_end(k, d)]) continue;
          out.push_back({m.arc_flow[k][d][p][t], 1.0});
          in.push_back({m.arc_flow[k][1 - d][p][t], 1.0});
        }
        const std::string zn = sanitize(m.zones[zi]);
        lp.add_row("land_in_" + zn + sx, "eq:MaxLeistungLand", in, RowSense::le, cap_ml[zi]);
        lp.add_row("land_out_" + zn + sx, "eq:MaxLeistungLand", out, RowSense::le, cap_ml[zi]);
        in.push_back({m.conv_on_var[zi], -1.0});
        out.push_back({m.conv_on_var[zi], -1.0});
        lp.add_row("pon_in_" + zn + sx, "eq:PmaxLand", std::move(in), RowSense::le, 0.0);
        lp.add_row("pon_out_" + zn + sx, "eq:PmaxLand", std::move(out), RowSense::le, 0.0);
      }
      for (std::size_t zi = 0; zi < nz; ++zi) {
        if (m.conv_off_var[zi] == npos) continue;
        std::vector<Term> in, out;  // mainland -> OBZ, OBZ -> mainland
        for (const auto& [k, d] : arcs_at[zi]) {
          if (m.offshore[other_end(k, d)]) continue;
          out.push_back({m.arc_flow[k][d][p][t], 1.0});
          in.push_back({m.arc_flow[k][1 - d][p][t], 1.0});
        }
        in.push_back({m.conv_off_var[zi], -1.0});
        out.push_back({m.conv_off_var[zi], -1.0});
        const std::string zn = sanitize(m.zones[zi]);
        lp.add_row("poff_in_" + zn + sx, "eq:PmaxSee", std::move(in), RowSense::le, 0.0);
        lp.add_row("poff_out_" + zn + sx, "eq:PmaxSee", std::move(out), RowSense::le, 0.0);
      }
    }
    for (std::size_t u = 0; u < nu; ++u) {
      if (m.units[u].fuel != Fuel::hydro) continue;
      std::vector<Term> terms;
      for (std::size_t t = 0; t < nt; ++t) terms.push_back({m.unit_var[u][p][t], 1.0});
      lp.add_row("hydro_" + sanitize(m.units[u].id) + "_w" + std::to_string(m.periods[p]), "plumbing",
                 std::move(terms), RowSense::le, m.units[u].capacity_gw * static_cast<double>(nt) * c.hydro_availability);
    }
  }

  // Fixed investment decisions.
  if (options.fixed) {
    const Topology& f = *options.fixed;
    auto fix = [&](std::size_t j, double v) {
      if (j == npos) return;
      auto& var = lp.var(j);
      var.lb = var.ub = v;
    };
    for (std::size_t zi = 0; zi < nz; ++zi) {
      fix(m.pmax_var[zi], lookup(f.owp_gw, m.zones[zi]));
      fix(m.conv_on_var[zi], lookup(f.converter_onshore_gw, m.zones[zi]));
      fix(m.conv_off_var[zi], lookup(f.converter_offshore_gw, m.zones[zi]));
    }
    for (std::size_t k = 0; k < na; ++k) {
      const auto* fa = find_arc(f, m.arcs[k].from, m.arcs[k].to);
      const double steps = fa ? fa->steps : 0.0;
      const double built = fa && fa->built ? 1.0 : 0.0;
      fix(m.ntc_var[k][0], steps);
      fix(m.ntc_var[k][1], steps);
      fix(m.adj_var[k][0], built);
      fix(m.adj_var[k][1], built);
    }
    for (std::size_t l = 0; l < nl; ++l) {
      const auto* fc = find_corridor(f, m.links[l].from, m.links[l].to);
      fix(m.corridor_var[l], fc && fc->built ? 1.0 : 0.0);
      fix(m.added_var[l], fc ? fc->added_gw : 0.0);
    }
  }

  // Adequacy: system-wide supply ceiling per step.
  for (std::size_t p = 0; p < np; ++p) {
    for (std::size_t t = 0; t < nt; ++t) {
      double load = 0.0, supply = 0.0;
      for (std::size_t u = 0; u < nu; ++u) supply += m.units[u].capacity_gw;
      for (std::size_t zi = 0; zi < nz; ++zi) {
        const std::string& z = m.zones[zi];
        if (m.offshore[zi]) {
          supply += lp.var(m.pmax_var[zi]).ub * m.owp_cf[z][p][t];
        } else {
          load += m.load[z][p][t];
          supply += m.res_available[z][p][t];
        }
      }
      if (load > supply + 1e-9) {
        const std::string msg = "load " + fmt_num(load) + " GW exceeds the supply ceiling " + fmt_num(supply) +
                                " GW in week " + std::to_string(m.periods[p]) + " step " + std::to_string(t);
        if (!options.allow_lost_load) throw domain_error(msg);
        m.warnings.push_back(msg);
      }
    }
  }
  return m;
}

std::map<std::string, std::size_t> expected_census(const ExpansionModel& m)
{
  const std::size_t pt = m.periods.size() * m.steps;
  std::size_t n_obz = 0, n_ml = 0, n_landing = 0, n_obz_ml = 0, hin = 0, back = 0, n_hydro = 0, n_exp = 0;
  for (std::size_t zi = 0; zi < m.zones.size(); ++zi) {
    if (m.offshore[zi]) ++n_obz;
    else ++n_ml;
    if (m.conv_on_var[zi] != ExpansionModel::npos) ++n_landing;
    if (m.conv_off_var[zi] != ExpansionModel::npos) ++n_obz_ml;
  }
  for (const auto& a : m.arcs) {
    (m.offshore[m.zone_index(a.from)] ? hin : back) += 1;
    (m.offshore[m.zone_index(a.to)] ? hin : back) += 1;
  }
  for (const auto& u : m.units) n_hydro += u.fuel == Fuel::hydro ? 1 : 0;
  for (const auto& l : m.links) n_exp += l.expandable ? 1 : 0;
  const std::size_t na = m.arcs.size();

  std::map<std::string, std::size_t> out;
  auto put = [&](const std::string& tag, std::size_t n) {
    if (n > 0) out[tag] += n;
  };
  put("eq:Production_OBZ_maxAvailable", n_obz);
  put("eq:NTC_max_hin_zurueck", na);
  put("eq:Adjazenz_bigM", 2 * na);
  put("eq:Production_OBZ", n_obz * pt);
  put("eq:Pexport_hin_OBZ", hin * pt);
  put("eq:Pexport_zurueck_OBZ", back * pt);
  put("eq:P_netto", m.zones.size() * pt);
  put("eq:LeistungsGG", n_obz * pt);
  put("eq:MaxLeistungLand", 2 * n_landing * pt);
  put("eq:PmaxLand", 2 * n_landing * pt);
  put("eq:PmaxSee", 2 * n_obz_ml * pt);
  put("plumbing", na + n_exp + n_ml * pt + 2 * n_exp * pt + n_hydro * m.periods.size());
  return out;
}

std::vector<std::pair<std::string, double>> CostBreakdown::terms() const
{
  return {{"OpEx", opex},
          {"AC_OWP", ac_owp},
          {"AC_c_fix", ac_c_fix},
          {"AC_c_varP_acdc", ac_c_varP_acdc},
          {"AC_c_varP_dcdc", ac_c_varP_dcdc},
          {"AC_b_fix", ac_b_fix},
          {"AC_b_varL", ac_b_varL},
          {"AC_b_varLP", ac_b_varLP},
          {"AC_ntc_onshore", ac_ntc_onshore}};
}

CostBreakdown cost_breakdown(const ExpansionModel& m, const std::vector<double>& x, double rel_tol)
{
  const auto& c = m.costs;
  const auto an = annuities(c);
  const double s = c.step_gw;
  const double dt = m.hours_per_step;
  const auto npos = ExpansionModel::npos;
  CostBreakdown b;

  for (std::size_t p = 0; p < m.periods.size(); ++p) {
    double week = 0.0;
    for (std::size_t t = 0; t < m.steps; ++t) {
      for (std::size_t u = 0; u < m.units.size(); ++u) week += x[m.unit_var[u][p][t]] * dt * 1e-3 * m.unit_cost[u];
      for (std::size_t zi = 0; zi < m.zones.size(); ++zi) {
        if (m.shed_var[zi][p][t] != npos) week += x[m.shed_var[zi][p][t]] * dt * 1e-3 * c.voll;
      }
    }
    b.opex += week * m.weights[p];
  }

  double owp = 0.0, conv = 0.0;
  for (std::size_t zi = 0; zi < m.zones.size(); ++zi) {
    if (m.pmax_var[zi] != npos) owp += x[m.pmax_var[zi]];
    if (m.conv_on_var[zi] != npos) conv += x[m.conv_on_var[zi]];
    if (m.conv_off_var[zi] != npos) conv += x[m.conv_off_var[zi]];
  }
  b.ac_owp = owp * c.c_owp_varP * 1000.0 * (an.crf_o + an.om_o);
  b.ac_c_varP_acdc = conv * c.c_c_varP_acdc / 2.0 * (an.crf_h + an.om_h);

  // Double sums over ordered zone pairs; each arc contributes its two
  // directed variables.
  double c_fix = 0.0, dcdc = 0.0, b_fix = 0.0, b_varL = 0.0, b_varLP = 0.0;
  for (std::size_t k = 0; k < m.arcs.size(); ++k) {
    const bool off[2] = {m.offshore[m.zone_index(m.arcs[k].from)], m.offshore[m.zone_index(m.arcs[k].to)]};
    for (int d = 0; d < 2; ++d) {
      const double a = x[m.adj_var[k][d]];
      const double n = x[m.ntc_var[k][d]];
      if (off[d]) c_fix += a * c.c_c_fix / 2.0;
      if (off[0] && off[1]) dcdc += n * s * c.c_c_varP_dcdc / 2.0;
      b_fix += a * c.c_b_fix / 2.0;
      b_varL += a * cable_cost_varL(m.arcs[k], c) / 2.0;
      b_varLP += n * s * cable_cost_varLP(m.arcs[k], c) / 2.0;
    }
  }
  b.ac_c_fix = c_fix * (an.crf_h + an.om_h);
  b.ac_c_varP_dcdc = dcdc * (an.crf_h + an.om_h);
  b.ac_b_fix = b_fix * an.crf_h;
  b.ac_b_varL = b_varL * an.crf_h;
  b.ac_b_varLP = b_varLP * (an.crf_h + an.om_h);

  for (std::size_t l = 0; l < m.links.size(); ++l) {
    if (m.corridor_var[l] == npos) continue;
    const double d = m.links[l].distance_km;
    b.ac_ntc_onshore += x[m.corridor_var[l]] * c.c_ntc_varL * d * an.crf_h;
    b.ac_ntc_onshore += x[m.added_var[l]] * c.c_ntc_varLP * d * an.crf_h;
  }

  const double objective = m.lp.objective_value(x);
  if (std::abs(b.total() - objective) > rel_tol * std::max(1.0, std::abs(objective)))
    throw model_error("cost breakdown " + fmt_num(b.total()) + " does not match objective " + fmt_num(objective));
  return b;
}

Solution solve(const ExpansionModel& model, const MipOptions& options)
{
  const MipResult r = solve_mip(model.lp, options);
  Solution sol;
  sol.status = r.status;
  sol.objective = r.objective;
  sol.best_bound = r.best_bound;
  sol.gap = r.gap;
  sol.nodes = r.nodes_explored;
  if (r.x.empty()) return sol;
  sol.x = r.x;
  if (r.final_lp.status == LpStatus::optimal) sol.duals = r.final_lp.duals;
  sol.breakdown = cost_breakdown(model, sol.x);
  return sol;
}

Topology extract_topology(const ExpansionModel& m, const std::vector<double>& x)
{
  const auto npos = ExpansionModel::npos;
  auto clean = [](double v) {
    // strip solver noise so that exports are stable
    const double r = std::round(v * 1e9) / 1e9;
    return r == 0.0 ? 0.0 : r;
  };
  Topology t;
  for (std::size_t k = 0; k < m.arcs.size(); ++k) {
    Topology::Arc a;
    a.from = m.arcs[k].from;
    a.to = m.arcs[k].to;
    a.steps = static_cast<int>(std::lround(x[m.ntc_var[k][0]]));
    a.built = x[m.adj_var[k][0]] > 0.5;
    t.arcs.push_back(a);
  }
  for (std::size_t l = 0; l < m.links.size(); ++l) {
    if (m.corridor_var[l] == npos) continue;
    t.corridors.push_back({m.links[l].from, m.links[l].to, x[m.corridor_var[l]] > 0.5, clean(x[m.added_var[l]])});
  }
  for (std::size_t zi = 0; zi < m.zones.size(); ++zi) {
    if (m.pmax_var[zi] != npos) t.owp_gw[m.zones[zi]] = clean(x[m.pmax_var[zi]]);
    if (m.conv_on_var[zi] != npos) t.converter_onshore_gw[m.zones[zi]] = clean(x[m.conv_on_var[zi]]);
    if (m.conv_off_var[zi] != npos) t.converter_offshore_gw[m.zones[zi]] = clean(x[m.conv_off_var[zi]]);
  }
  return t;
}

double flow_between(const ExpansionModel& m, const std::vector<double>& x, std::size_t from, std::size_t to,
                    std::size_t p, std::size_t t)
{
  double f = 0.0;
  for (std::size_t k = 0; k < m.arcs.size(); ++k) {
    const std::size_t a = m.zone_index(m.arcs[k].from), b = m.zone_index(m.arcs[k].to);
    if (a == from && b == to) f += x[m.arc_flow[k][0][p][t]];
    if (b == from && a == to) f += x[m.arc_flow[k][1][p][t]];
  }
  for (std::size_t l = 0; l < m.links.size(); ++l) {
    const std::size_t a = m.zone_index(m.links[l].from), b = m.zone_index(m.links[l].to);
    if (a == from && b == to) f += x[m.link_flow[l][0][p][t]];
    if (b == from && a == to) f += x[m.link_flow[l][1][p][t]];
  }
  return f;
}

double clearing_price(const ExpansionModel& m, const std::vector<double>& duals, std::size_t zone, std::size_t p,
                      std::size_t t)
{
  const double scale = m.weights[p] * m.hours_per_step * 1e-3;
  return duals[m.balance_row[zone][p][t]] / scale;
}

std::vector<std::string> check_invariants(const ExpansionModel& m, const std::vector<double>& x, double tol)
{
  std::vector<std::string> out;
  const auto npos = ExpansionModel::npos;
  const double s = m.costs.step_gw;
  auto at = [&](std::size_t p, std::size_t t) {
    return " (week " + std::to_string(m.periods[p]) + ", step " + std::to_string(t) + ")";
  };

  for (std::size_t j = 0; j < m.lp.num_vars(); ++j) {
    const auto& v = m.lp.var(j);
    if (v.is_integral() && std::abs(x[j] - std::round(x[j])) > tol) out.push_back("non-integral " + v.name);
  }
  for (std::size_t k = 0; k < m.arcs.size(); ++k) {
    const std::string name = m.arcs[k].from + "–" + m.arcs[k].to;
    if (std::abs(x[m.ntc_var[k][0]] - x[m.ntc_var[k][1]]) > tol) out.push_back("NTC asymmetry " + name);
    if (std::abs(x[m.adj_var[k][0]] - x[m.adj_var[k][1]]) > tol) out.push_back("adjacency asymmetry " + name);
    for (int d = 0; d < 2; ++d) {
      const bool built = x[m.adj_var[k][d]] > 0.5;
      if (!built && x[m.ntc_var[k][d]] > tol) out.push_back("steps without adjacency on " + name);
      for (std::size_t p = 0; p < m.periods.size(); ++p) {
        for (std::size_t t = 0; t < m.steps; ++t) {
          const double f = x[m.arc_flow[k][d][p][t]];
          if (!built && f > tol) out.push_back("flow on unbuilt arc " + name + at(p, t));
          if (f > s * x[m.ntc_var[k][d]] + tol) out.push_back("flow above NTC on " + name + at(p, t));
          if (f < -tol) out.push_back("negative flow on " + name + at(p, t));
        }
      }
    }
  }

  for (std::size_t zi = 0; zi < m.zones.size(); ++zi) {
    const std::string& z = m.zones[zi];
    if (m.pmax_var[zi] != npos && x[m.pmax_var[zi]] > m.lp.var(m.pmax_var[zi]).ub + tol)
      out.push_back("installed capacity above availability in " + z);
    for (std::size_t p = 0; p < m.periods.size(); ++p) {
      for (std::size_t t = 0; t < m.steps; ++t) {
        double in_off = 0.0, out_off = 0.0;  // flows exchanged with offshore zones
        double net_in = 0.0;
        for (std::size_t o = 0; o < m.zones.size(); ++o) {
          if (o == zi) continue;
          const double fin = flow_between(m, x, o, zi, p, t);
          const double fout = flow_between(m, x, zi, o, p, t);
          net_in += fin - fout;
          if (m.offshore[o]) {
            in_off += fin;
            out_off += fout;
          }
        }
        double residual;
        if (m.offshore[zi]) {
          const double owp = x[m.owp_var[zi][p][t]];
          const double cap = m.owp_cf.at(z)[p][t] * x[m.pmax_var[zi]];
          if (owp < -tol || owp > cap + tol) out.push_back("OWP feed-in outside [0, CF*Pmax] in " + z + at(p, t));
          residual = owp + net_in;
          if (m.conv_off_var[zi] != npos) {
            double ml_in = 0.0, ml_out = 0.0;
            for (std::size_t o = 0; o < m.zones.size(); ++o) {
              if (m.offshore[o]) continue;
              ml_in += flow_between(m, x, o, zi, p, t);
              ml_out += flow_between(m, x, zi, o, p, t);
            }
            const double rating = x[m.conv_off_var[zi]];
            if (ml_in > rating + tol || ml_out > rating + tol)
              out.push_back("offshore converter rating exceeded in " + z + at(p, t));
          }
        } else {
          double supply = 0.0;
          for (std::size_t u = 0; u < m.units.size(); ++u) {
            if (m.units[u].zone == z) supply += x[m.unit_var[u][p][t]];
          }
          if (m.res_var[zi][p][t] != npos) supply += x[m.res_var[zi][p][t]];
          if (m.shed_var[zi][p][t] != npos) supply += x[m.shed_var[zi][p][t]];
          residual = supply + net_in - m.load.at(z)[p][t];
          if (m.conv_on_var[zi] != npos) {
            const double cap = m.landing_cap_gw[zi];
            if (in_off > cap + tol || out_off > cap + tol) out.push_back("landing cap exceeded in " + z + at(p, t));
            const double rating = x[m.conv_on_var[zi]];
            if (in_off > rating + tol || out_off > rating + tol)
              out.push_back("onshore converter rating exceeded in " + z + at(p, t));
          } else if (in_off > tol || out_off > tol) {
            out.push_back("offshore exchange without landing in " + z + at(p, t));
          }
        }
        if (std::abs(residual) > tol) out.push_back("balance residual " + fmt_num(residual) + " GW in " + z + at(p, t));
      }
    }
  }
  return out;
}

}  // namespace gtce
