// Acceptance checks: one pass/fail line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <regex>
#include <sstream>
#include <string>

#include "fixtures.hpp"
#include "gtce/geo.hpp"
#include "gtce/market.hpp"
#include "gtce/pipeline.hpp"
#include "oracle/dense_lp.hpp"

using namespace gtce;
namespace fs = std::filesystem;

namespace {

const std::string kData = GTCE_TEST_DATA;

struct Outcome {
  std::vector<std::string> failures;
  std::ostringstream detail;  // summary of what was checked

  bool pass() const { return failures.empty(); }
  void require(bool ok, const std::string& what)
  {
    if (!ok) failures.push_back(what);
  }
  std::string line() const
  {
    if (pass()) return detail.str();
    std::string s;
    for (std::size_t i = 0; i < failures.size() && i < 3; ++i) s += (i ? "; " : "") + failures[i];
    if (failures.size() > 3) s += "; +" + std::to_string(failures.size() - 3) + " more";
    const std::string d = detail.str();
    return d.empty() ? s : s + " [" + d + "]";
  }
};

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::max(1.0, std::abs(b)); }

std::string num(double v)
{
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

fs::path scratch(const std::string& name)
{
  const fs::path p = fs::temp_directory_path() / ("gtce_acceptance_" + name);
  fs::remove_all(p);
  return p;
}

MipOptions exact()
{
  MipOptions o;
  o.rel_gap = 1e-9;
  return o;
}

// 1. Annualization arithmetic and the dc-dc converter cost.
void annualization(Outcome& out)
{
  const double a = crf(0.06, 27), b = crf(0.05, 40);
  // independent annuity sums
  double pv_a = 0.0, pv_b = 0.0;
  for (int t = 1; t <= 27; ++t) pv_a += std::pow(1.06, -t);
  for (int t = 1; t <= 40; ++t) pv_b += std::pow(1.05, -t);
  out.require(std::abs(a - 0.0757) <= 5e-4, "crf(0.06,27) = " + num(a));
  out.require(std::abs(b - 0.0583) <= 5e-4, "crf(0.05,40) = " + num(b));
  out.require(close(a, 1.0 / pv_a, 1e-12) && close(b, 1.0 / pv_b, 1e-12), "crf disagrees with annuity sum");
  const CostTable c;
  out.require(c.c_c_varP_dcdc == 125.0 && c.c_c_varP_acdc / 6.0 == 125.0,
              "dc-dc cost " + num(c.c_c_varP_dcdc) + " M€/GW");
  out.detail << "crf(0.06,27)=" << num(a) << ", crf(0.05,40)=" << num(b) << ", dc-dc " << num(c.c_c_varP_dcdc)
             << " M€/GW";
}

struct ToyRun {
  ExpansionModel model;
  Solution solution;
};

std::vector<ToyRun> solve_toys(std::size_t count)
{
  std::vector<ToyRun> runs;
  for (std::uint64_t seed = 1; seed <= count; ++seed) {
    const auto toy = fixtures::random_toy(seed);
    ToyRun r;
    r.model = build_model(toy.scenario, toy.weeks);
    r.solution = solve(r.model, exact());
    runs.push_back(std::move(r));
  }
  return runs;
}

// 2. Branch-and-bound optimum equals exhaustive enumeration.
void mip_against_enumeration(Outcome& out, const std::vector<ToyRun>& runs)
{
  double worst = 0.0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& r = runs[i];
    const auto ref = oracle::enumerate_mip(r.model.lp);
    if (r.solution.status != MipStatus::optimal || ref.status != oracle::Status::optimal) {
      out.require(false, "toy " + std::to_string(i + 1) + " not solved to optimality");
      continue;
    }
    const double rel = std::abs(r.solution.objective - ref.objective) / std::max(1.0, std::abs(ref.objective));
    worst = std::max(worst, rel);
    out.require(rel <= 1e-6, "toy " + std::to_string(i + 1) + ": " + num(r.solution.objective) + " vs " + num(ref.objective));
  }
  out.detail << runs.size() << " random toys, worst relative deviation " << num(worst);
}

// 3. Cost terms add up to the objective.
void cost_identity(Outcome& out, const std::vector<ToyRun>& runs)
{
  double worst = 0.0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& m = runs[i].model;
    const auto& x = runs[i].solution.x;
    const auto b = cost_breakdown(m, x, 1.0);
    double sum = 0.0;
    for (const auto& [name, v] : b.terms()) sum += v;
    // dispatch cost recomputed from the raw variables
    double opex = 0.0;
    for (std::size_t p = 0; p < m.periods.size(); ++p)
      for (std::size_t t = 0; t < m.steps; ++t) {
        for (std::size_t u = 0; u < m.units.size(); ++u)
          opex += m.weights[p] * m.hours_per_step * 1e-3 * m.unit_cost[u] * x[m.unit_var[u][p][t]];
        for (std::size_t z = 0; z < m.zones.size(); ++z)
          if (m.shed_var[z][p][t] != ExpansionModel::npos)
            opex += m.weights[p] * m.hours_per_step * 1e-3 * m.costs.voll * x[m.shed_var[z][p][t]];
      }
    const double obj = m.lp.objective_value(x);
    for (double v : {sum, runs[i].solution.objective})
      worst = std::max(worst, std::abs(v - obj) / std::max(1.0, std::abs(obj)));
    out.require(close(sum, obj, 1e-6), "toy " + std::to_string(i + 1) + ": terms " + num(sum) + " vs objective " + num(obj));
    out.require(close(opex, b.opex, 1e-9), "toy " + std::to_string(i + 1) + ": OpEx recomputation differs");
  }
  out.detail << runs.size() << " solutions, worst relative deviation " << num(worst);
}

// 4. Structural invariants of every toy solution, checked from raw values.
void invariants(Outcome& out, const std::vector<ToyRun>& runs)
{
  const double tol = 1e-6;
  double worst_residual = 0.0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& m = runs[i].model;
    const auto& x = runs[i].solution.x;
    const std::string tag = "toy " + std::to_string(i + 1) + ": ";
    for (std::size_t k = 0; k < m.arcs.size(); ++k) {
      out.require(std::abs(x[m.ntc_var[k][0]] - x[m.ntc_var[k][1]]) <= tol, tag + "asymmetric NTC on arc " + std::to_string(k));
      for (int d = 0; d < 2; ++d) {
        if (x[m.adj_var[k][d]] > 0.5) continue;
        for (const auto& week : m.arc_flow[k][d])
          for (std::size_t v : week) out.require(std::abs(x[v]) <= tol, tag + "flow on an arc without adjacency");
      }
    }
    for (std::size_t p = 0; p < m.periods.size(); ++p)
      for (std::size_t t = 0; t < m.steps; ++t) {
        for (std::size_t z = 0; z < m.zones.size(); ++z) {
          if (m.offshore[z]) {
            const double owp = x[m.owp_var[z][p][t]];
            const double cap = m.owp_cf.at(m.zones[z])[p][t] * x[m.pmax_var[z]];
            out.require(owp >= -tol && owp <= cap + tol, tag + "offshore feed-in outside [0, CF·Pmax]");
            continue;
          }
          // power landing from, and sent to, offshore zones
          double landing = 0.0, leaving = 0.0;
          for (std::size_t k = 0; k < m.arcs.size(); ++k) {
            const std::size_t a = m.zone_index(m.arcs[k].from), b = m.zone_index(m.arcs[k].to);
            if (b == z && m.offshore[a]) landing += x[m.arc_flow[k][0][p][t]], leaving += x[m.arc_flow[k][1][p][t]];
            if (a == z && m.offshore[b]) landing += x[m.arc_flow[k][1][p][t]], leaving += x[m.arc_flow[k][0][p][t]];
          }
          const double cap = std::min(m.landing_cap_gw[z], 6.0) + tol;
          out.require(landing <= cap && leaving <= cap, tag + "landing cap exceeded");
          const std::size_t row = m.balance_row[z][p][t];
          const double residual = std::abs(m.lp.row_activity(row, x) - m.lp.row(row).rhs);
          worst_residual = std::max(worst_residual, residual);
        }
        for (std::size_t z = 0; z < m.zones.size(); ++z) {
          if (!m.offshore[z]) continue;
          const std::size_t row = m.balance_row[z][p][t];
          worst_residual = std::max(worst_residual, std::abs(m.lp.row_activity(row, x) - m.lp.row(row).rhs));
        }
      }
  }
  out.require(worst_residual <= 1e-6, "balance residual " + num(worst_residual));
  out.detail << runs.size() << " solutions, worst balance residual " << num(worst_residual);
}

// 5. Representative weeks of the 21-year synthetic fixture.
void temporal_clustering(Outcome& out)
{
  const auto t0 = std::chrono::steady_clock::now();
  const auto in = load_scenario(kData + "/north_sea/desk.json");
  const auto clusters = site_clusters(in, in.max_dist_km, 1);
  const Scenario s = offshore_scenario(in, clusters);
  const auto weeks = representative_weeks(in, s, in.nrmse_tolerance, 1);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const auto series = model_series(in, s);
  const auto it = std::find_if(series.begin(), series.end(), [](const HourlySeries& h) { return h.id == "res:total"; });
  const auto& hourly = it->values;
  const std::size_t years = hourly.size() / kHoursPerYear;
  out.require(years == 21, "fixture has " + std::to_string(years) + " years");

  // weeks straight from the hourly series: 52 per year, trailing hours dropped
  std::vector<const double*> wk;
  for (std::size_t y = 0; y < years; ++y)
    for (std::size_t w = 0; w < kWeeksPerYear; ++w) wk.push_back(hourly.data() + y * kHoursPerYear + w * kHoursPerWeek);
  double lo = 1e300, hi = -1e300;
  std::size_t lo_week = 0, hi_week = 0;
  for (std::size_t w = 0; w < wk.size(); ++w)
    for (std::size_t h = 0; h < kHoursPerWeek; ++h) {
      if (wk[w][h] < lo) lo = wk[w][h], lo_week = w;
      if (wk[w][h] > hi) hi = wk[w][h], hi_week = w;
    }
  const auto& src = weeks.source_weeks;
  const auto has = [&](std::size_t w) { return std::find(src.begin(), src.end(), w) != src.end(); };
  out.require(has(lo_week), "week with the global minimum missing");
  out.require(has(hi_week), "week with the global maximum missing");

  const int total = std::accumulate(weeks.weights.begin(), weeks.weights.end(), 0);
  out.require(total == 52, "weights sum to " + std::to_string(total));
  out.require(std::all_of(weeks.weights.begin(), weeks.weights.end(), [](int w) { return w >= 1; }), "weight below one");

  double sq = 0.0;
  for (const double* week : wk) {
    double best = 1e300;
    for (std::size_t m : src) {
      double d = 0.0;
      for (std::size_t h = 0; h < kHoursPerWeek; ++h) d += (week[h] - wk[m][h]) * (week[h] - wk[m][h]);
      best = std::min(best, d);
    }
    sq += best;
  }
  const double check = std::sqrt(sq / static_cast<double>(wk.size() * kHoursPerWeek)) / (hi - lo);
  out.require(check <= 0.10, "recomputed nRMSE " + num(check));
  out.require(seconds < 120.0, "runtime " + num(seconds) + " s");
  out.detail << wk.size() << " weeks -> " << weeks.periods() << " medoids, ΣN=" << total << ", nRMSE " << num(check)
             << " (reported " << num(weeks.achieved_nrmse) << "), " << num(seconds) << " s";
}

// 6. Converter clusters of the North Sea site polygons.
void spatial_clustering(Outcome& out)
{
  const auto in = load_scenario(kData + "/north_sea/north_sea_sites.json");
  const auto grid = superimpose_grid(in.scenario.sites, in.grid_spacing_km);
  SiteClusterOptions opt;
  opt.max_dist_km = 70.0;
  const auto clusters = cluster_sites(grid.nodes, opt);
  double worst = 0.0;
  std::size_t covered = 0;
  for (const auto& c : clusters)
    for (std::size_t id : c.members) {
      worst = std::max(worst, haversine(grid.nodes.at(id).location, c.medoid));
      ++covered;
    }
  out.require(covered == grid.nodes.size(), "not every node is assigned once");
  out.require(worst <= 70.0 + 1e-9, "node " + num(worst) + " km from its medoid");
  out.require(clusters.size() >= 20 && clusters.size() <= 30, std::to_string(clusters.size()) + " clusters");
  out.detail << grid.nodes.size() << " nodes -> " << clusters.size() << " clusters, max distance " << num(worst) << " km";
}

// 7. CO2 price sweep on the toy.
void co2_sweep(Outcome& out)
{
  RunManifest m;
  m.scenario_path = kData + "/toy/toy_sweep.json";
  m.mode = RunMode::sweep;
  m.rel_gap = 1e-9;
  m.out_dir = scratch("sweep").string();
  const auto report = run_sweep(m);
  out.require(report.code == ExitCode::ok, "sweep exit " + std::to_string(static_cast<int>(report.code)));
  const auto& rows = report.rows;
  out.require(rows.size() >= 3, "too few price points");
  if (rows.size() < 3) return;
  for (std::size_t i = 1; i < rows.size(); ++i)
    out.require(rows[i].owp_gw >= rows[i - 1].owp_gw - 1e-9, "offshore capacity falls at x" + num(rows[i].multiplier));
  out.require(rows.front().owp_gw == 0.0, "capacity at the lowest price " + num(rows.front().owp_gw));
  out.require(rows.back().owp_gw > 0.0, "no capacity at the highest price");

  const auto in = load_scenario(m.scenario_path);
  std::ostringstream owp;
  for (const auto& row : rows) {
    Scenario s = in.scenario;
    s.co2_multiplier = row.multiplier;
    const auto weeks = representative_weeks(in, s, in.nrmse_tolerance, 1);
    const auto model = build_model(s, weeks);
    const auto ref = oracle::enumerate_mip(model.lp);
    out.require(ref.status == oracle::Status::optimal && close(row.objective, ref.objective, 1e-6),
                "x" + num(row.multiplier) + ": " + num(row.objective) + " vs enumeration " + num(ref.objective));
    owp << (owp.tellp() > 0 ? "," : "") << num(row.owp_gw);
  }
  out.detail << rows.size() << " prices, offshore GW " << owp.str() << ", all matched by enumeration";
}

// 8. Surplus deltas and duration curves.
void market(Outcome& out)
{
  const auto toy = fixtures::displacement();
  const auto build = fixtures::displacement_build();
  const auto off = fixed_topology_dispatch(toy.scenario, toy.weeks, build);
  const auto same = compare(off, fixed_topology_dispatch(toy.scenario, toy.weeks, build));
  for (const auto& row : same.zones)
    out.require(row.delta_cs == 0.0 && row.delta_ps == 0.0, "identical cases differ in zone " + row.zone);

  DispatchOptions ro;
  ro.offshore = false;
  const auto ref = fixed_topology_dispatch(toy.scenario, toy.weeks, reference_topology(build), ro);
  const auto r = compare(ref, off);
  double cs = 0.0, ps = 0.0;
  for (const auto& row : r.zones) {
    out.require(row.delta_cs >= 0.0, "consumer surplus falls in " + row.zone);
    cs += row.delta_cs;
    ps += row.delta_ps;
  }
  out.require(ps < 0.0, "incumbent producer surplus does not fall");

  for (std::size_t z = 0; z < off.zones.size(); ++z) {
    if (!off.offshore[z]) continue;
    const auto curve = duration_curve(off.owp_feed[z], off.weights, off.hours_per_step);
    out.require(!curve.empty(), "empty duration curve");
    for (std::size_t h = 1; h < curve.size(); ++h)
      if (curve[h] > curve[h - 1]) out.require(false, "duration curve increases");
    out.require(curve.front() <= off.owp_capacity[z] + 1e-9 && curve.back() >= -1e-9, "duration curve exceeds capacity");
  }
  out.detail << "ΔCS " << num(cs) << " M€/a, incumbent ΔPS " << num(ps) << " M€/a";
}

// All files under `root` except log.txt, by relative path.
std::map<std::string, std::string> snapshot(const fs::path& root)
{
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file() && e.path().filename() != "log.txt")
      files[fs::relative(e.path(), root).string()] = read_file(e.path().string());
  return files;
}

// 9. Bundles independent of the job count; wall-clock times only in logs.
void determinism(Outcome& out)
{
  const std::regex clock(R"(\d{4}-\d\d-\d\dT\d\d:\d\d:\d\d)");
  std::size_t compared = 0;

  struct Case {
    std::string name;
    RunManifest manifest;
    unsigned jobs;
    std::function<RunReport(const RunManifest&)> run;
  };
  RunManifest sweep;
  sweep.scenario_path = kData + "/toy/toy_sweep.json";
  sweep.mode = RunMode::sweep;
  sweep.rel_gap = 1e-9;
  RunManifest multi;
  multi.scenario_path = kData + "/north_sea/desk.json";
  multi.mode = RunMode::multi_year;
  const std::vector<Case> cases{{"sweep", sweep, 4, run_sweep}, {"multi_year", multi, 3, run_multi_year}};

  for (const auto& c : cases) {
    std::map<std::string, std::string> files[2];
    bool logged = true;
    for (int i = 0; i < 2; ++i) {
      RunManifest m = c.manifest;
      m.jobs = i == 0 ? 1 : c.jobs;
      const fs::path dir = scratch(c.name + std::to_string(i));
      m.out_dir = dir.string();
      const auto r = c.run(m);
      out.require(r.code == ExitCode::ok, c.name + " exit " + std::to_string(static_cast<int>(r.code)));
      files[i] = snapshot(dir);
      logged = logged && std::regex_search(read_file((fs::path(r.dir) / "log.txt").string()), clock);
    }
    out.require(!files[0].empty() && files[0] == files[1], c.name + " bundles differ between job counts");
    out.require(logged, c.name + " log carries no timestamps");
    for (const auto& [path, text] : files[0]) out.require(!std::regex_search(text, clock), path + " carries a timestamp");
    compared += files[0].size();
  }
  out.detail << compared << " files byte-identical across job counts, timestamps only in log.txt";
}

// 10. Clearing prices from load-coverage duals.
void clearing_prices(Outcome& out)
{
  const auto merit = fixtures::merit_order({0.5, 1.5, 2.5});
  const auto o = fixed_topology_dispatch(merit.scenario, merit.weeks, {});
  const double expected[] = {20.0, 50.0, 90.0};
  for (std::size_t t = 0; t < 3; ++t)
    out.require(std::abs(o.price[0][0][t] - expected[t]) <= 1e-6,
                "merit order step " + std::to_string(t) + ": " + num(o.price[0][0][t]));

  const auto cong = fixtures::congestion(1.0);
  const auto c = fixed_topology_dispatch(cong.scenario, cong.weeks, {});
  const double a = c.price[0][0][0], b = c.price[1][0][0];
  out.require(std::abs(a - 10.0) <= 1e-6 && std::abs(b - 60.0) <= 1e-6, "congested prices " + num(a) + "/" + num(b));
  out.require(std::abs(c.price[0][0][1] - c.price[1][0][1]) <= 1e-6, "uncongested step has split prices");
  out.detail << "merit order 20/50/90 €/MWh, congested split " << num(a) << "/" << num(b) << " €/MWh";
}

}  // namespace

int main()
{
  std::vector<ToyRun> toys;
  try {
    toys = solve_toys(30);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "toy setup failed: %s\n", e.what());
  }

  const std::vector<std::pair<int, std::function<void(Outcome&)>>> criteria{
      {1, annualization},
      {2, [&](Outcome& o) { mip_against_enumeration(o, toys); }},
      {3, [&](Outcome& o) { cost_identity(o, toys); }},
      {4, [&](Outcome& o) { invariants(o, toys); }},
      {5, temporal_clustering},
      {6, spatial_clustering},
      {7, co2_sweep},
      {8, market},
      {9, determinism},
      {10, clearing_prices},
  };
  int failed = 0;
  for (const auto& [n, fn] : criteria) {
    Outcome o;
    try {
      if (n >= 2 && n <= 4 && toys.empty()) throw std::runtime_error("no toy solutions");
      fn(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::printf("criterion %d: %s - %s\n", n, o.pass() ? "PASS" : "FAIL", o.line().c_str());
    std::fflush(stdout);
    if (!o.pass()) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
