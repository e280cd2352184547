#include "gtce/market.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gtce/format.hpp"
#include "gtce/parallel.hpp"

namespace gtce {

std::size_t MarketOutcome::zone_index(const std::string& id) const
{
  auto it = std::find(zones.begin(), zones.end(), id);
  if (it == zones.end()) throw domain_error("zone " + id + " not in market outcome");
  return static_cast<std::size_t>(it - zones.begin());
}

namespace {

StepSeries blank(std::size_t periods, std::size_t steps) { return StepSeries(periods, std::vector<double>(steps, 0.0)); }

std::uint64_t demand_fingerprint(const MarketOutcome& o)
{
  std::string key = fmt_num(o.hours_per_step) + "|" + std::to_string(o.steps);
  for (double w : o.weights) key += "|" + fmt_num(w);
  for (std::size_t z = 0; z < o.zones.size(); ++z) {
    if (o.offshore[z]) continue;
    key += "|" + o.zones[z];
    for (const auto& row : o.demand[z])
      for (double v : row) key += "," + fmt_num(v);
  }
  return fnv1a(key);
}

}  // namespace

MarketOutcome fixed_topology_dispatch(const Scenario& scenario, const RepresentativeWeeks& weeks,
                                      const Topology& topology, const DispatchOptions& options)
{
  const std::size_t np = weeks.periods();
  std::vector<ExpansionModel> models(np);
  std::vector<LpResult> results(np);
  parallel_for(np, options.jobs, [&](std::size_t p) {
    ExpansionOptions eo;
    eo.allow_offshore = options.offshore;
    eo.fixed = topology;
    eo.only_period = p;
    models[p] = build_model(scenario, weeks, eo);
    results[p] = solve_lp(models[p].lp, options.lp);
    if (results[p].status != LpStatus::optimal)
      throw model_error("fixed-topology dispatch of week " + std::to_string(p) + " is " + to_string(results[p].status));
  });

  const ExpansionModel& m0 = models.front();
  MarketOutcome o;
  o.zones = m0.zones;
  o.offshore = m0.offshore;
  o.steps = m0.steps;
  o.hours_per_step = m0.hours_per_step;
  for (std::size_t p = 0; p < np; ++p) o.weights.push_back(weeks.weights[p]);
  const std::size_t nz = o.zones.size(), nt = o.steps;
  o.price.assign(nz, blank(np, nt));
  o.demand.assign(nz, blank(np, nt));
  o.shed.assign(nz, blank(np, nt));
  o.res_feed.assign(nz, blank(np, nt));
  o.owp_feed.assign(nz, blank(np, nt));
  o.owp_potential.assign(nz, blank(np, nt));
  o.owp_capacity.assign(nz, 0.0);
  for (std::size_t u = 0; u < m0.units.size(); ++u) {
    o.unit_ids.push_back(m0.units[u].id);
    o.unit_zone.push_back(m0.units[u].zone);
    o.unit_cost.push_back(m0.unit_cost[u]);
  }
  o.dispatch.assign(m0.units.size(), blank(np, nt));
  auto flow_series = [&](const std::string& a, const std::string& b) -> StepSeries& {
    auto it = o.flows.find({a, b});
    if (it == o.flows.end()) it = o.flows.emplace(std::make_pair(a, b), blank(np, nt)).first;
    return it->second;
  };
  for (const auto& arc : m0.arcs) {
    flow_series(arc.from, arc.to);
    flow_series(arc.to, arc.from);
  }
  for (const auto& l : m0.links) {
    flow_series(l.from, l.to);
    flow_series(l.to, l.from);
  }

  const auto npos = ExpansionModel::npos;
  for (std::size_t p = 0; p < np; ++p) {
    const ExpansionModel& m = models[p];
    const auto& x = results[p].x;
    o.opex += o.weights[p] * cost_breakdown(m, x).opex;
    for (std::size_t zi = 0; zi < nz; ++zi) {
      const std::string& z = o.zones[zi];
      if (m.pmax_var[zi] != npos) o.owp_capacity[zi] = x[m.pmax_var[zi]];
      for (std::size_t t = 0; t < nt; ++t) {
        o.price[zi][p][t] = clearing_price(m, results[p].duals, zi, 0, t);
        if (o.offshore[zi]) {
          o.owp_feed[zi][p][t] = x[m.owp_var[zi][0][t]];
          o.owp_potential[zi][p][t] = m.owp_cf.at(z)[0][t] * o.owp_capacity[zi];
        } else {
          o.demand[zi][p][t] = m.load.at(z)[0][t];
          if (m.res_var[zi][0][t] != npos) o.res_feed[zi][p][t] = x[m.res_var[zi][0][t]];
          if (m.shed_var[zi][0][t] != npos) o.shed[zi][p][t] = x[m.shed_var[zi][0][t]];
        }
      }
    }
    for (std::size_t u = 0; u < m.units.size(); ++u)
      for (std::size_t t = 0; t < nt; ++t) o.dispatch[u][p][t] = x[m.unit_var[u][0][t]];
    for (std::size_t k = 0; k < m.arcs.size(); ++k) {
      for (std::size_t t = 0; t < nt; ++t) {
        flow_series(m.arcs[k].from, m.arcs[k].to)[p][t] += x[m.arc_flow[k][0][0][t]];
        flow_series(m.arcs[k].to, m.arcs[k].from)[p][t] += x[m.arc_flow[k][1][0][t]];
      }
    }
    for (std::size_t l = 0; l < m.links.size(); ++l) {
      for (std::size_t t = 0; t < nt; ++t) {
        flow_series(m.links[l].from, m.links[l].to)[p][t] += x[m.link_flow[l][0][0][t]];
        flow_series(m.links[l].to, m.links[l].from)[p][t] += x[m.link_flow[l][1][0][t]];
      }
    }
  }
  o.fingerprint = demand_fingerprint(o);
  return o;
}

Topology reference_topology(const Topology& offshore_case)
{
  Topology t;
  t.corridors = offshore_case.corridors;
  return t;
}

double annual_sum(const MarketOutcome& o, const StepSeries& series)
{
  double total = 0.0;
  for (std::size_t p = 0; p < series.size(); ++p) {
    double week = 0.0;
    for (double v : series[p]) week += v;
    total += o.weights[p] * week * o.hours_per_step;
  }
  return total * kAnnualScale;
}

namespace {

void require_same_basis(const MarketOutcome& ref, const MarketOutcome& off)
{
  if (ref.fingerprint != off.fingerprint)
    throw domain_error("reference and offshore outcomes stem from different demand data");
}

// Σ weighted a·b over steps, GW·€/MWh·h -> M€, annualized.
double product_sum(const MarketOutcome& o, const StepSeries& a, const StepSeries& b)
{
  StepSeries prod = a;
  for (std::size_t p = 0; p < a.size(); ++p)
    for (std::size_t t = 0; t < a[p].size(); ++t) prod[p][t] = a[p][t] * b[p][t] * 1e-3;
  return annual_sum(o, prod);
}

double producer_surplus(const MarketOutcome& o, const std::string& zone)
{
  const std::size_t zi = o.zone_index(zone);
  const auto& price = o.price[zi];
  double ps = product_sum(o, o.res_feed[zi], price);
  for (std::size_t u = 0; u < o.unit_ids.size(); ++u) {
    if (o.unit_zone[u] != zone) continue;
    StepSeries margin = price;
    for (auto& row : margin)
      for (double& v : row) v -= o.unit_cost[u];
    ps += product_sum(o, o.dispatch[u], margin);
  }
  return ps;
}

}  // namespace

double consumer_surplus_delta(const MarketOutcome& ref, const MarketOutcome& off, const std::string& zone)
{
  require_same_basis(ref, off);
  const std::size_t zr = ref.zone_index(zone), zo = off.zone_index(zone);
  return product_sum(ref, ref.demand[zr], ref.price[zr]) - product_sum(off, off.demand[zo], off.price[zo]);
}

double producer_surplus_delta(const MarketOutcome& ref, const MarketOutcome& off, const std::string& zone)
{
  require_same_basis(ref, off);
  return producer_surplus(off, zone) - producer_surplus(ref, zone);
}

double owp_margin(const MarketOutcome& o, const std::string& zone)
{
  const std::size_t zi = o.zone_index(zone);
  return product_sum(o, o.owp_feed[zi], o.price[zi]);
}

double congestion_rent(const MarketOutcome& o)
{
  double cr = 0.0;
  for (const auto& [pair, flow] : o.flows) {
    const auto& pa = o.price[o.zone_index(pair.first)];
    const auto& pb = o.price[o.zone_index(pair.second)];
    StepSeries spread = pb;
    for (std::size_t p = 0; p < spread.size(); ++p)
      for (std::size_t t = 0; t < spread[p].size(); ++t) spread[p][t] = pb[p][t] - pa[p][t];
    cr += product_sum(o, flow, spread);
  }
  return cr;
}

double annual_dispatch_cost(const MarketOutcome& o) { return o.opex * kAnnualScale; }

SurplusReport compare(const MarketOutcome& ref, const MarketOutcome& off)
{
  require_same_basis(ref, off);
  SurplusReport r;
  for (std::size_t zi = 0; zi < off.zones.size(); ++zi) {
    if (off.offshore[zi]) {
      r.owp_margin[off.zones[zi]] = owp_margin(off, off.zones[zi]);
      r.delta_owp_margin += r.owp_margin[off.zones[zi]];
      continue;
    }
    const std::string& z = off.zones[zi];
    r.zones.push_back({z, consumer_surplus_delta(ref, off, z), producer_surplus_delta(ref, off, z)});
  }
  for (std::size_t zi = 0; zi < ref.zones.size(); ++zi) {
    if (ref.offshore[zi]) r.delta_owp_margin -= owp_margin(ref, ref.zones[zi]);
  }
  r.delta_congestion_rent = congestion_rent(off) - congestion_rent(ref);
  r.delta_dispatch_cost = annual_dispatch_cost(ref) - annual_dispatch_cost(off);
  return r;
}

std::vector<double> duration_curve(const StepSeries& series, const std::vector<double>& weights,
                                   double hours_per_step)
{
  std::vector<double> out;
  for (std::size_t p = 0; p < series.size(); ++p) {
    const long reps = std::lround(weights[p] * hours_per_step);
    for (double v : series[p]) out.insert(out.end(), static_cast<std::size_t>(std::max(0L, reps)), v);
  }
  std::stable_sort(out.begin(), out.end(), std::greater<>());
  return out;
}

std::vector<TradeBalance> trade_balance(const MarketOutcome& o)
{
  std::vector<TradeBalance> out;
  for (const auto& [pair, flow] : o.flows) {
    const auto& back = o.flows.at({pair.second, pair.first});
    TradeBalance b;
    b.from = pair.first;
    b.to = pair.second;
    b.export_twh = annual_sum(o, flow) * 1e-3;
    b.import_twh = annual_sum(o, back) * 1e-3;
    b.net_twh = b.export_twh - b.import_twh;
    out.push_back(b);
  }
  return out;
}

std::map<std::string, double> curtailment_twh(const MarketOutcome& o)
{
  std::map<std::string, double> out;
  for (std::size_t zi = 0; zi < o.zones.size(); ++zi) {
    if (!o.offshore[zi]) continue;
    StepSeries gap = o.owp_potential[zi];
    for (std::size_t p = 0; p < gap.size(); ++p)
      for (std::size_t t = 0; t < gap[p].size(); ++t) gap[p][t] = std::max(0.0, gap[p][t] - o.owp_feed[zi][p][t]);
    out[o.zones[zi]] = annual_sum(o, gap) * 1e-3;
  }
  return out;
}

namespace {

std::string clean(double v)
{
  // 1e-9 resolution keeps CSV output stable against last-bit noise
  const double r = std::round(v * 1e9) / 1e9;
  return fmt_num(r == 0.0 ? 0.0 : r);
}

}  // namespace

std::string mcp_csv(const MarketOutcome& o, const std::vector<std::size_t>& source_weeks)
{
  std::ostringstream out;
  out << "zone,week,hour,eur_per_mwh\n";
  for (std::size_t zi = 0; zi < o.zones.size(); ++zi) {
    for (std::size_t p = 0; p < o.price[zi].size(); ++p) {
      const std::size_t week = p < source_weeks.size() ? source_weeks[p] : p;
      for (std::size_t t = 0; t < o.steps; ++t)
        out << o.zones[zi] << ',' << week << ',' << fmt_num(static_cast<double>(t) * o.hours_per_step) << ','
            << clean(o.price[zi][p][t]) << '\n';
    }
  }
  return out.str();
}

std::string surplus_csv(const SurplusReport& r)
{
  std::ostringstream out;
  out << "zone,delta_cs_meur,delta_ps_meur\n";
  for (const auto& row : r.zones) out << row.zone << ',' << clean(row.delta_cs) << ',' << clean(row.delta_ps) << '\n';
  for (const auto& [zone, margin] : r.owp_margin) out << zone << ",0," << clean(margin) << '\n';
  return out.str();
}

std::string balance_csv(const std::vector<TradeBalance>& balance)
{
  std::ostringstream out;
  out << "from,to,export_twh,import_twh,net_twh\n";
  for (const auto& b : balance)
    out << b.from << ',' << b.to << ',' << clean(b.export_twh) << ',' << clean(b.import_twh) << ','
        << clean(b.net_twh) << '\n';
  return out.str();
}

std::string duration_csv(const std::vector<double>& curve)
{
  std::ostringstream out;
  out << "hour,gw\n";
  const double scale = curve.empty() ? 1.0 : static_cast<double>(kHoursPerYear) / static_cast<double>(curve.size());
  for (std::size_t i = 0; i < curve.size(); ++i) out << clean((static_cast<double>(i) + 1.0) * scale) << ',' << clean(curve[i]) << '\n';
  return out.str();
}

}  // namespace gtce
