#include "gtce/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "gtce/format.hpp"
#include "gtce/lp_format.hpp"
#include "gtce/parallel.hpp"

namespace gtce {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

const char* to_string(RunMode mode)
{
  switch (mode) {
    case RunMode::multi_year: return "multi-year";
    case RunMode::single_year: return "single-year";
    case RunMode::sweep: return "sweep";
  }
  return "?";
}

std::vector<std::string> validate(const RunManifest& m)
{
  std::vector<std::string> out;
  for (std::size_t i = 0; i < m.multipliers.size(); ++i) {
    if (!(m.multipliers[i] > 0.0)) out.push_back("CO2 multiplier must be > 0 (got " + fmt_num(m.multipliers[i]) + ")");
    if (i > 0 && !(m.multipliers[i] > m.multipliers[i - 1])) out.push_back("CO2 multipliers must be ascending");
  }
  if (m.mode != RunMode::sweep && m.multipliers.size() > 1) out.push_back("several CO2 multipliers need the sweep mode");
  if (!(m.rel_gap >= 0.0)) out.push_back("relative gap must be >= 0");
  if (m.nrmse_tolerance && !(*m.nrmse_tolerance > 0.0 && *m.nrmse_tolerance < 1.0))
    out.push_back("nRMSE tolerance must lie in (0,1)");
  if (m.max_dist_km && !(*m.max_dist_km > 0.0)) out.push_back("maximum distance must be > 0");
  if (m.jobs < 1) out.push_back("jobs must be >= 1");
  return out;
}

std::string manifest_json(const RunManifest& m, const std::string& scenario_text)
{
  ordered_json j;
  j["scenario"] = fs::path(m.scenario_path).filename().string();
  j["scenario_hash"] = hex64(fnv1a(scenario_text));
  j["mode"] = to_string(m.mode);
  j["multipliers"] = m.multipliers;
  j["seed"] = m.seed;
  j["rel_gap"] = m.rel_gap;
  j["node_limit"] = m.node_limit;
  j["nrmse_tolerance"] = m.nrmse_tolerance ? json(*m.nrmse_tolerance) : json(nullptr);
  j["max_dist_km"] = m.max_dist_km ? json(*m.max_dist_km) : json(nullptr);
  return j.dump();
}

std::string run_id(const RunManifest& m, const std::string& scenario_text)
{
  return hex64(fnv1a(manifest_json(m, scenario_text)));
}

// ---------------------------------------------------------------- inputs

std::vector<ConverterCluster> site_clusters(const ScenarioInputs& in, double max_dist_km, std::uint64_t seed)
{
  if (in.scenario.sites.empty()) return {};
  const auto grid = superimpose_grid(in.scenario.sites, in.grid_spacing_km);
  if (grid.nodes.empty()) throw domain_error("no grid node falls inside any candidate site; reduce the grid spacing");
  SiteClusterOptions opt;
  opt.max_dist_km = max_dist_km;
  opt.seed = seed;
  return cluster_sites(grid.nodes, opt);
}

Scenario offshore_scenario(const ScenarioInputs& in, const std::vector<ConverterCluster>& clusters)
{
  if (clusters.empty()) return in.scenario;
  return with_offshore_zones(in.scenario, clusters);
}

namespace {

double clean(double v)
{
  const double r = std::round(v * 1e9) / 1e9;
  return r == 0.0 ? 0.0 : r;
}

const HourlySeries* find_series(const std::vector<HourlySeries>& all, const std::string& id)
{
  for (const auto& s : all) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

// Series `<prefix><zone>` if present, else that of the nearest matching site.
const HourlySeries& nearest(const ScenarioInputs& in, const std::string& prefix, const Zone& zone, bool offshore_site)
{
  if (const auto* s = find_series(in.weather, prefix + zone.id)) return *s;
  const HourlySeries* best = nullptr;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& site : in.weather_sites) {
    if (site.offshore != offshore_site) continue;
    const auto* s = find_series(in.weather, prefix + site.id);
    if (!s) continue;
    const double d = haversine(site.location, zone.location);
    if (d < best_d) {
      best_d = d;
      best = s;
    }
  }
  if (!best)
    throw domain_error("no " + std::string(offshore_site ? "offshore" : "onshore") + " weather series '" + prefix +
                       "*' for zone " + zone.id);
  return *best;
}

std::vector<double> window(const std::vector<double>& v, std::size_t hours, std::optional<std::size_t> year,
                           const std::string& what)
{
  // Load may cover one year and is then repeated for every weather year.
  std::vector<double> out;
  if (year) {
    const std::size_t begin = *year * kHoursPerYear;
    if (v.size() >= begin + kHoursPerYear) return {v.begin() + static_cast<long>(begin), v.begin() + static_cast<long>(begin + kHoursPerYear)};
    if (v.size() == kHoursPerYear) return v;
    throw domain_error(what + " does not cover weather year " + std::to_string(*year));
  }
  if (v.size() == hours) return v;
  if (v.size() == kHoursPerYear && hours % kHoursPerYear == 0) {
    for (std::size_t k = 0; k < hours / kHoursPerYear; ++k) out.insert(out.end(), v.begin(), v.end());
    return out;
  }
  throw domain_error(what + " has " + std::to_string(v.size()) + " hours, weather has " + std::to_string(hours));
}

}  // namespace

std::vector<HourlySeries> model_series(const ScenarioInputs& in, const Scenario& s, std::optional<std::size_t> year)
{
  std::size_t hours = 0;
  if (!in.weather.empty()) hours = in.weather.front().values.size();
  else if (!s.load.empty()) hours = s.load.begin()->second.size();
  if (hours == 0) throw domain_error("scenario has neither weather nor load series");
  if (year && (*year + 1) * kHoursPerYear > hours) throw domain_error("weather year " + std::to_string(*year) + " out of range");
  const std::size_t n = year ? kHoursPerYear : hours;

  std::vector<HourlySeries> out;
  HourlySeries total{"res:total", "", std::vector<double>(n, 0.0)};
  auto cut = [&](const std::vector<double>& v, const std::string& what) { return window(v, hours, year, what); };

  for (const auto& z : s.zones) {
    if (z.kind == ZoneKind::mainland) {
      auto it = s.load.find(z.id);
      if (it != s.load.end()) out.push_back({load_series(z.id), "", cut(it->second, "load of " + z.id)});
      auto fleet = s.renewables.find(z.id);
      if (fleet == s.renewables.end()) continue;
      const std::pair<const char*, double> techs[] = {{"wind_on", fleet->second.onshore_wind_gw},
                                                      {"wind_off", fleet->second.offshore_wind_gw},
                                                      {"pv", fleet->second.pv_gw}};
      for (const auto& [tech, gw] : techs) {
        if (gw <= 0.0) continue;
        const std::string t = tech;
        const HourlySeries& raw =
            t == "pv" ? nearest(in, "pv:", z, false) : nearest(in, "wind:", z, t == "wind_off");
        std::vector<double> cf = cut(raw.values, raw.id);
        if (t != "pv") {
          for (double& v : cf) v = wind_capacity_factor(v, in.power_curve);
        }
        for (std::size_t h = 0; h < n; ++h) total.values[h] += gw * cf[h];
        out.push_back({fleet_cf_series(z.id, t), "", std::move(cf)});
      }
    } else {
      const HourlySeries& raw = nearest(in, "wind:", z, true);
      std::vector<double> cf = cut(raw.values, raw.id);
      for (double& v : cf) v = wind_capacity_factor(v, in.power_curve);
      auto avail = s.max_available_gw.find(z.id);
      const double gw = avail == s.max_available_gw.end() ? 0.0 : avail->second;
      for (std::size_t h = 0; h < n; ++h) total.values[h] += gw * cf[h];
      out.push_back({offshore_cf_series(z.id), "", std::move(cf)});
    }
  }
  out.push_back(std::move(total));
  return out;
}

RepresentativeWeeks representative_weeks(const ScenarioInputs& in, const Scenario& s, double tolerance,
                                         std::uint64_t seed, std::optional<std::size_t> year)
{
  RepresentativeWeeks weeks;
  if (in.weeks) {
    weeks = *in.weeks;
  } else {
    const auto series = model_series(in, s, year);
    WeekClusterOptions opt;
    opt.tolerance = tolerance;
    opt.seed = seed;
    opt.normalization = in.normalization;
    opt.multivariate = in.multivariate;
    opt.aggregate = {"res:total"};
    weeks = cluster_weeks(slice_weeks(series), opt);
  }
  if (in.coarsen_stride > 1) weeks = coarsen(weeks, in.coarsen_stride);
  return weeks;
}

// ---------------------------------------------------------------- cases

CaseResult solve_case(const Scenario& scenario, const RepresentativeWeeks& weeks, const CaseOptions& options,
                      const std::string& label)
{
  CaseResult r;
  r.label = label;
  r.multiplier = scenario.co2_multiplier;
  r.co2_price = effective_co2(scenario);
  try {
    r.model = build_model(scenario, weeks);
    for (const auto& w : r.model.warnings) r.log.push_back("warning: " + w);
    r.log.push_back("model: " + std::to_string(r.model.lp.num_vars()) + " variables, " +
                    std::to_string(r.model.lp.num_rows()) + " rows");
    MipOptions mo;
    mo.rel_gap = options.rel_gap;
    mo.node_limit = options.node_limit;
    r.solution = solve(r.model, mo);
    r.log.push_back("solve: " + std::string(to_string(r.solution.status)) + ", objective " +
                    fmt_num(clean(r.solution.objective)) + ", nodes " + std::to_string(r.solution.nodes));
    if (r.solution.status == MipStatus::infeasible || r.solution.status == MipStatus::unbounded) {
      r.code = ExitCode::infeasible;
      r.error = std::string("model is ") + to_string(r.solution.status);
      return r;
    }
    if (r.solution.x.empty()) {
      r.code = ExitCode::solver_limit;
      r.error = "node limit reached without an incumbent";
      return r;
    }
    if (r.solution.status == MipStatus::node_limit) {
      r.code = ExitCode::solver_limit;
      r.error = "node limit reached, gap " + fmt_num(r.solution.gap);
    }
    r.violations = check_invariants(r.model, r.solution.x);
    for (const auto& v : r.violations) r.log.push_back("invariant violated: " + v);
    r.topology = extract_topology(r.model, r.solution.x);
    if (options.evaluate) {
      DispatchOptions off;
      off.jobs = options.jobs;
      r.off = fixed_topology_dispatch(scenario, weeks, r.topology, off);
      DispatchOptions ref = off;
      ref.offshore = false;
      r.ref = fixed_topology_dispatch(scenario, weeks, reference_topology(r.topology), ref);
      r.surplus = compare(r.ref, r.off);
      r.evaluated = true;
      r.log.push_back("evaluation: dispatch cost saving " + fmt_num(clean(r.surplus.delta_dispatch_cost)) + " MEUR/a");
    }
  } catch (const domain_error& e) {
    r.code = ExitCode::validation;
    r.error = e.what();
  } catch (const io_error& e) {
    r.code = ExitCode::io;
    r.error = e.what();
  } catch (const std::exception& e) {
    r.code = ExitCode::solver_limit;
    r.error = e.what();
  }
  if (!r.error.empty()) r.log.push_back("error: " + r.error);
  return r;
}

// ---------------------------------------------------------------- bundles

std::string topology_to_json(const Topology& t, const Scenario& s, const std::vector<ConverterCluster>& clusters)
{
  ordered_json j;
  ordered_json zones = ordered_json::array();
  for (const auto& z : s.zones) {
    zones.push_back({{"id", z.id},
                     {"kind", z.kind == ZoneKind::offshore ? "offshore" : "mainland"},
                     {"lon", z.location.lon},
                     {"lat", z.location.lat}});
  }
  j["zones"] = zones;
  ordered_json arcs = ordered_json::array();
  for (const auto& a : t.arcs) {
    arcs.push_back({{"from", a.from}, {"to", a.to}, {"steps", a.steps}, {"built", a.built}, {"gw", a.steps * s.costs.step_gw}});
  }
  j["arcs"] = arcs;
  ordered_json corr = ordered_json::array();
  for (const auto& c : t.corridors) corr.push_back({{"from", c.from}, {"to", c.to}, {"built", c.built}, {"added_gw", c.added_gw}});
  j["corridors"] = corr;
  j["owp_gw"] = t.owp_gw;
  j["converter_onshore_gw"] = t.converter_onshore_gw;
  j["converter_offshore_gw"] = t.converter_offshore_gw;
  ordered_json cl = ordered_json::array();
  for (const auto& c : clusters) {
    cl.push_back({{"id", c.id},
                  {"lon", c.medoid.lon},
                  {"lat", c.medoid.lat},
                  {"pooled_gw", clean(c.pooled_gw)},
                  {"members", c.members.size()},
                  {"max_distance_km", clean(c.max_distance_km)}});
  }
  j["clusters"] = cl;
  return j.dump(2) + "\n";
}

Topology topology_from_json(const std::string& text)
{
  Topology t;
  try {
    const json j = json::parse(text);
    for (const auto& a : j.value("arcs", json::array()))
      t.arcs.push_back({a.at("from").get<std::string>(), a.at("to").get<std::string>(), a.at("steps").get<int>(),
                        a.at("built").get<bool>()});
    for (const auto& c : j.value("corridors", json::array()))
      t.corridors.push_back({c.at("from").get<std::string>(), c.at("to").get<std::string>(), c.at("built").get<bool>(),
                             c.at("added_gw").get<double>()});
    if (j.contains("owp_gw")) t.owp_gw = j.at("owp_gw").get<std::map<std::string, double>>();
    if (j.contains("converter_onshore_gw"))
      t.converter_onshore_gw = j.at("converter_onshore_gw").get<std::map<std::string, double>>();
    if (j.contains("converter_offshore_gw"))
      t.converter_offshore_gw = j.at("converter_offshore_gw").get<std::map<std::string, double>>();
  } catch (const json::exception& e) {
    throw domain_error(std::string("topology: ") + e.what());
  }
  return t;
}

namespace {

std::string status_of(const CaseResult& r)
{
  if (r.code == ExitCode::ok) return "ok";
  if (r.code == ExitCode::infeasible) return "infeasible";
  if (r.code == ExitCode::solver_limit) return r.solution.x.empty() ? "solver-failure" : "node-limit";
  if (r.code == ExitCode::io) return "io-error";
  return "invalid";
}

ordered_json census_json(const ExpansionModel& m)
{
  ordered_json c = ordered_json::object();
  for (const auto& [tag, n] : m.tag_census()) c[tag] = n;
  return c;
}

std::string solution_json(const CaseResult& r)
{
  ordered_json j;
  j["status"] = to_string(r.solution.status);
  j["objective_meur"] = clean(r.solution.objective);
  j["best_bound_meur"] = clean(r.solution.best_bound);
  j["gap"] = clean(r.solution.gap);
  j["nodes"] = r.solution.nodes;
  ordered_json terms = ordered_json::object();
  for (const auto& [name, v] : r.solution.breakdown.terms()) terms[name] = clean(v);
  j["cost_breakdown_meur"] = terms;
  j["constraint_tags"] = census_json(r.model);
  j["invariant_violations"] = r.violations;
  ordered_json vars = ordered_json::object();
  for (std::size_t i = 0; i < r.solution.x.size(); ++i) {
    const double v = clean(r.solution.x[i]);
    if (v != 0.0) vars[r.model.lp.var(i).name] = v;
  }
  j["variables"] = vars;
  return j.dump(2) + "\n";
}

std::string summary_json(const CaseResult& r, const RepresentativeWeeks& weeks, const std::string& manifest)
{
  ordered_json j;
  j["label"] = r.label;
  j["manifest"] = json::parse(manifest);
  j["status"] = status_of(r);
  if (!r.error.empty()) j["error"] = r.error;
  j["co2_multiplier"] = r.multiplier;
  j["co2_price_eur_per_t"] = clean(r.co2_price);
  j["co2_price_display"] = std::lround(r.co2_price);
  ordered_json w;
  w["weights"] = weeks.weights;
  w["source_weeks"] = weeks.source_weeks;
  w["steps"] = weeks.steps;
  w["hours_per_step"] = weeks.hours_per_step;
  w["nrmse"] = clean(weeks.achieved_nrmse);
  j["representative_weeks"] = w;
  if (!r.solution.x.empty()) {
    j["objective_meur"] = clean(r.solution.objective);
    j["opex_meur"] = clean(r.solution.breakdown.opex);
    j["owp_gw"] = clean(r.topology.total_owp_gw());
    j["built_arcs"] = r.topology.built_arcs();
    j["constraint_tags"] = census_json(r.model);
    j["warnings"] = r.model.warnings;
  }
  if (r.evaluated) {
    ordered_json rows = ordered_json::array();
    for (const auto& row : r.surplus.zones)
      rows.push_back({{"zone", row.zone}, {"delta_cs_meur", clean(row.delta_cs)}, {"delta_ps_meur", clean(row.delta_ps)}});
    j["surplus"] = rows;
    ordered_json margins = ordered_json::object();
    for (const auto& [z, v] : r.surplus.owp_margin) margins[z] = clean(v);
    j["owp_margin_meur"] = margins;
    j["delta_congestion_rent_meur"] = clean(r.surplus.delta_congestion_rent);
    j["delta_dispatch_cost_meur"] = clean(r.surplus.delta_dispatch_cost);
    ordered_json curt = ordered_json::object();
    for (const auto& [z, v] : curtailment_twh(r.off)) curt[z] = clean(v);
    j["curtailment_twh"] = curt;
  }
  return j.dump(2) + "\n";
}

std::string timestamp()
{
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string timed(const std::vector<std::string>& lines)
{
  std::string out;
  const std::string ts = timestamp();
  for (const auto& l : lines) out += "[" + ts + "] " + l + "\n";
  return out;
}

std::string dir_label(double multiplier) { return "x" + fmt_num(multiplier); }

}  // namespace

void write_bundle(const std::string& dir, const CaseResult& r, const RepresentativeWeeks& weeks,
                  const std::vector<ConverterCluster>& clusters, const std::string& manifest)
{
  const fs::path d(dir);
  if (r.model.lp.num_vars() > 0) write_file((d / "model.lp").string(), export_lp(r.model.lp, r.label));
  if (!r.solution.x.empty()) {
    write_file((d / "solution.json").string(), solution_json(r));
    Scenario zones_only;
    for (const auto& id : r.model.zones) {
      Zone z;
      z.id = id;
      z.kind = r.model.offshore[r.model.zone_index(id)] ? ZoneKind::offshore : ZoneKind::mainland;
      zones_only.zones.push_back(z);
    }
    zones_only.costs = r.model.costs;
    write_file((d / "topology.json").string(), topology_to_json(r.topology, zones_only, clusters));
  }
  if (r.evaluated) {
    write_file((d / "mcp.csv").string(), mcp_csv(r.off, weeks.source_weeks));
    write_file((d / "surplus.csv").string(), surplus_csv(r.surplus));
    write_file((d / "balance.csv").string(), balance_csv(trade_balance(r.off)));
    for (std::size_t zi = 0; zi < r.off.zones.size(); ++zi) {
      if (!r.off.offshore[zi]) continue;
      write_file((d / ("duration_" + r.off.zones[zi] + ".csv")).string(),
                 duration_csv(duration_curve(r.off.owp_feed[zi], r.off.weights, r.off.hours_per_step)));
    }
  }
  write_file((d / "summary.json").string(), summary_json(r, weeks, manifest));
}

std::string sweep_csv(const std::vector<SweepRow>& rows)
{
  std::ostringstream out;
  out << "co2_multiplier,co2_price_eur_per_t,status,owp_gw,built_arcs,objective_meur,opex_meur\n";
  for (const auto& r : rows) {
    out << fmt_num(r.multiplier) << ',' << fmt_num(clean(r.co2_price)) << ',' << r.status << ',' << fmt_num(clean(r.owp_gw))
        << ',' << r.arcs << ',' << fmt_num(clean(r.objective)) << ',' << fmt_num(clean(r.opex)) << '\n';
  }
  return out.str();
}

// ---------------------------------------------------------------- runs

namespace {

struct Prepared {
  std::string text;
  std::string id;
  std::string manifest;
  fs::path dir;
  ScenarioInputs inputs;
  std::vector<ConverterCluster> clusters;
  Scenario scenario;
  std::vector<std::string> log;
};

// Loads and validates inputs; fills `report` and returns false on failure.
bool prepare(const RunManifest& m, Prepared& p, RunReport& report)
{
  auto fail = [&](ExitCode code, const std::string& msg) {
    report.code = code;
    report.failures.push_back(msg);
    return false;
  };
  const auto problems = validate(m);
  if (!problems.empty()) return fail(ExitCode::validation, problems.front());
  try {
    p.text = read_file(m.scenario_path);
  } catch (const io_error& e) {
    return fail(ExitCode::io, e.what());
  }
  p.manifest = manifest_json(m, p.text);
  p.id = run_id(m, p.text);
  p.dir = fs::path(m.out_dir) / p.id;
  report.run_id = p.id;
  report.dir = p.dir.string();
  p.log.push_back("run " + p.id + " (" + to_string(m.mode) + ")");
  try {
    p.inputs = parse_scenario(p.text, fs::path(m.scenario_path).parent_path().string());
    const auto violations = validate(p.inputs.scenario);
    if (!violations.empty()) {
      for (const auto& v : violations) report.failures.push_back(v);
      report.code = ExitCode::validation;
      return false;
    }
    const double max_dist = m.max_dist_km.value_or(p.inputs.max_dist_km);
    p.clusters = site_clusters(p.inputs, max_dist, m.seed);
    if (!p.clusters.empty()) p.log.push_back("sites: " + std::to_string(p.clusters.size()) + " converter clusters");
    p.scenario = offshore_scenario(p.inputs, p.clusters);
  } catch (const io_error& e) {
    return fail(ExitCode::io, e.what());
  } catch (const std::exception& e) {
    return fail(ExitCode::validation, e.what());
  }
  return true;
}

void finish(RunReport& report, const Prepared& p, const std::vector<std::string>& extra)
{
  std::vector<std::string> lines = p.log;
  lines.insert(lines.end(), extra.begin(), extra.end());
  for (const auto& f : report.failures) lines.push_back("failure: " + f);
  lines.push_back("exit " + std::to_string(static_cast<int>(report.code)));
  try {
    write_file((p.dir / "log.txt").string(), timed(lines));
  } catch (const io_error& e) {
    report.code = ExitCode::io;
    report.failures.push_back(e.what());
  }
}

// Worst code wins; validation < infeasible < solver limit < io by number.
void merge(ExitCode& into, ExitCode code)
{
  if (static_cast<int>(code) > static_cast<int>(into)) into = code;
}

SweepRow row_of(const CaseResult& r)
{
  SweepRow row;
  row.multiplier = r.multiplier;
  row.co2_price = r.co2_price;
  row.status = status_of(r);
  if (!r.solution.x.empty()) {
    row.owp_gw = r.topology.total_owp_gw();
    row.arcs = r.topology.built_arcs();
    row.objective = r.solution.objective;
    row.opex = r.solution.breakdown.opex;
  }
  return row;
}

CaseOptions case_options(const RunManifest& m, unsigned jobs)
{
  CaseOptions o;
  o.rel_gap = m.rel_gap;
  o.node_limit = m.node_limit;
  o.jobs = jobs;
  return o;
}

}  // namespace

RunReport run_sweep(const RunManifest& manifest)
{
  RunReport report;
  Prepared p;
  if (!prepare(manifest, p, report)) {
    if (!p.id.empty()) finish(report, p, {});
    return report;
  }
  std::vector<double> mults = manifest.multipliers;
  if (mults.empty()) mults = p.inputs.sweep_multipliers;
  if (mults.empty()) mults = {p.scenario.co2_multiplier};
  for (std::size_t i = 0; i < mults.size(); ++i) {
    if (!(mults[i] > 0.0) || (i > 0 && !(mults[i] > mults[i - 1]))) {
      report.code = ExitCode::validation;
      report.failures.push_back("CO2 multipliers must be positive and ascending");
      finish(report, p, {});
      return report;
    }
  }

  RepresentativeWeeks weeks;
  try {
    weeks = representative_weeks(p.inputs, p.scenario, manifest.nrmse_tolerance.value_or(p.inputs.nrmse_tolerance),
                                 manifest.seed);
  } catch (const std::exception& e) {
    report.code = ExitCode::validation;
    report.failures.push_back(e.what());
    finish(report, p, {});
    return report;
  }
  p.log.push_back("weeks: " + std::to_string(weeks.periods()) + " representative weeks, nRMSE " +
                  fmt_num(clean(weeks.achieved_nrmse)));

  std::vector<CaseResult> results(mults.size());
  parallel_for(mults.size(), manifest.jobs, [&](std::size_t i) {
    Scenario s = p.scenario;
    s.co2_multiplier = mults[i];
    results[i] = solve_case(s, weeks, case_options(manifest, 1), dir_label(mults[i]));
    write_bundle((p.dir / dir_label(mults[i])).string(), results[i], weeks, p.clusters, p.manifest);
  });

  std::vector<std::string> lines;
  for (const auto& r : results) {
    for (const auto& l : r.log) lines.push_back(r.label + ": " + l);
    report.rows.push_back(row_of(r));
    if (r.code != ExitCode::ok) {
      merge(report.code, r.code);
      report.failures.push_back(r.label + ": " + r.error);
    }
  }
  write_file((p.dir / "summary.csv").string(), sweep_csv(report.rows));
  ordered_json j;
  j["manifest"] = json::parse(p.manifest);
  j["rows"] = ordered_json::array();
  for (const auto& r : report.rows) {
    j["rows"].push_back({{"co2_multiplier", r.multiplier},
                         {"co2_price_eur_per_t", clean(r.co2_price)},
                         {"status", r.status},
                         {"owp_gw", clean(r.owp_gw)},
                         {"built_arcs", r.arcs},
                         {"objective_meur", clean(r.objective)},
                         {"opex_meur", clean(r.opex)}});
  }
  write_file((p.dir / "summary.json").string(), j.dump(2) + "\n");
  finish(report, p, lines);
  return report;
}

RunReport run_multi_year(const RunManifest& manifest)
{
  RunReport report;
  Prepared p;
  if (!prepare(manifest, p, report)) {
    if (!p.id.empty()) finish(report, p, {});
    return report;
  }
  if (!manifest.multipliers.empty()) p.scenario.co2_multiplier = manifest.multipliers.front();
  RepresentativeWeeks weeks;
  try {
    weeks = representative_weeks(p.inputs, p.scenario, manifest.nrmse_tolerance.value_or(p.inputs.nrmse_tolerance),
                                 manifest.seed);
  } catch (const std::exception& e) {
    report.code = ExitCode::validation;
    report.failures.push_back(e.what());
    finish(report, p, {});
    return report;
  }
  p.log.push_back("weeks: " + std::to_string(weeks.periods()) + " representative weeks, nRMSE " +
                  fmt_num(clean(weeks.achieved_nrmse)));
  const CaseResult r = solve_case(p.scenario, weeks, case_options(manifest, manifest.jobs), "multi-year");
  write_bundle(p.dir.string(), r, weeks, p.clusters, p.manifest);
  report.rows.push_back(row_of(r));
  if (r.code != ExitCode::ok) {
    report.code = r.code;
    report.failures.push_back(r.error);
  }
  finish(report, p, r.log);
  return report;
}

RunReport run_single_year_study(const RunManifest& manifest)
{
  RunReport report;
  Prepared p;
  if (!prepare(manifest, p, report)) {
    if (!p.id.empty()) finish(report, p, {});
    return report;
  }
  if (!manifest.multipliers.empty()) p.scenario.co2_multiplier = manifest.multipliers.front();
  const std::size_t years = p.inputs.years();
  if (years == 0 || p.inputs.weeks) {
    report.code = ExitCode::validation;
    report.failures.push_back("the single-year study needs hourly weather for at least one full year");
    finish(report, p, {});
    return report;
  }
  const double tol = manifest.nrmse_tolerance.value_or(p.inputs.nrmse_tolerance);
  std::vector<CaseResult> results(years);
  std::vector<RepresentativeWeeks> weeks(years);
  auto label = [](std::size_t y) {
    std::string s = std::to_string(y);
    return "year_" + std::string(s.size() < 2 ? 2 - s.size() : 0, '0') + s;
  };
  parallel_for(years, manifest.jobs, [&](std::size_t y) {
    try {
      weeks[y] = representative_weeks(p.inputs, p.scenario, tol, manifest.seed, y);
    } catch (const std::exception& e) {
      results[y].label = label(y);
      results[y].code = ExitCode::validation;
      results[y].error = e.what();
      results[y].log.push_back("error: " + results[y].error);
      return;
    }
    results[y] = solve_case(p.scenario, weeks[y], case_options(manifest, 1), label(y));
    write_bundle((p.dir / label(y)).string(), results[y], weeks[y], p.clusters, p.manifest);
  });

  std::vector<std::string> zones;
  for (const auto& z : p.scenario.zones) zones.push_back(z.id);
  std::vector<std::string> lines;
  for (const auto& r : results) {
    for (const auto& l : r.log) lines.push_back(r.label + ": " + l);
    if (r.code == ExitCode::ok) {
      report.configs.push_back(to_config(r.topology, zones, p.scenario.costs.step_gw, r.label));
    } else {
      merge(report.code, r.code);
      report.failures.push_back(r.label + ": " + r.error);
    }
    report.rows.push_back(row_of(r));
  }
  ordered_json j;
  j["manifest"] = json::parse(p.manifest);
  j["years"] = years;
  j["solved"] = report.configs.size();
  j["gaps"] = report.failures;
  if (!report.configs.empty()) {
    const std::size_t k = std::min(p.inputs.representative_topologies, report.configs.size());
    report.representatives = cluster_topologies(report.configs, k, manifest.seed);
    write_file((p.dir / "configs.json").string(), configs_to_json(report.configs));
    write_file((p.dir / "representatives.json").string(), representatives_to_json(report.configs, report.representatives));
    ordered_json reps = ordered_json::array();
    for (std::size_t m : report.representatives.medoids) reps.push_back(report.configs[m].source);
    j["representatives"] = reps;
  }
  j["rows"] = ordered_json::array();
  for (std::size_t y = 0; y < results.size(); ++y) {
    const auto& r = report.rows[y];
    j["rows"].push_back({{"year", results[y].label},
                         {"status", r.status},
                         {"owp_gw", clean(r.owp_gw)},
                         {"built_arcs", r.arcs},
                         {"objective_meur", clean(r.objective)}});
  }
  write_file((p.dir / "summary.json").string(), j.dump(2) + "\n");
  finish(report, p, lines);
  return report;
}

RunReport run_evaluate(const RunManifest& manifest, const std::string& topology_path)
{
  RunReport report;
  Prepared p;
  if (!prepare(manifest, p, report)) {
    if (!p.id.empty()) finish(report, p, {});
    return report;
  }
  if (!manifest.multipliers.empty()) p.scenario.co2_multiplier = manifest.multipliers.front();
  CaseResult r;
  r.label = "evaluate";
  r.multiplier = p.scenario.co2_multiplier;
  r.co2_price = effective_co2(p.scenario);
  RepresentativeWeeks weeks;
  try {
    r.topology = topology_from_json(read_file(topology_path));
    weeks = representative_weeks(p.inputs, p.scenario, manifest.nrmse_tolerance.value_or(p.inputs.nrmse_tolerance),
                                 manifest.seed);
    DispatchOptions off;
    off.jobs = manifest.jobs;
    r.off = fixed_topology_dispatch(p.scenario, weeks, r.topology, off);
    DispatchOptions ref = off;
    ref.offshore = false;
    r.ref = fixed_topology_dispatch(p.scenario, weeks, reference_topology(r.topology), ref);
    r.surplus = compare(r.ref, r.off);
    r.evaluated = true;
  } catch (const io_error& e) {
    r.code = ExitCode::io;
    r.error = e.what();
  } catch (const domain_error& e) {
    r.code = ExitCode::validation;
    r.error = e.what();
  } catch (const std::exception& e) {
    r.code = ExitCode::infeasible;
    r.error = e.what();
  }
  write_bundle(p.dir.string(), r, weeks, p.clusters, p.manifest);
  if (r.code != ExitCode::ok) {
    report.code = r.code;
    report.failures.push_back(r.error);
  }
  finish(report, p, {});
  return report;
}

}  // namespace gtce
