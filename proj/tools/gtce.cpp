#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "gtce/format.hpp"
#include "gtce/pipeline.hpp"

using namespace gtce;

namespace {

int exit_code(ExitCode c) { return static_cast<int>(c); }

int report(const RunReport& r)
{
  if (!r.dir.empty()) std::cout << r.dir << "\n";
  for (const auto& row : r.rows) {
    std::cout << "co2 " << fmt_num(std::round(row.co2_price * 100.0) / 100.0) << " EUR/t: " << row.status << ", OWP "
              << fmt_num(std::round(row.owp_gw * 1e6) / 1e6) << " GW, arcs " << row.arcs << ", objective "
              << fmt_num(std::round(row.objective * 1e3) / 1e3) << " MEUR/a\n";
  }
  for (const auto& f : r.failures) std::cerr << "error: " << f << "\n";
  return exit_code(r.code);
}

// Loads the scenario behind a manifest; prints the problem and returns the
// exit code on failure.
std::optional<int> load(const RunManifest& m, ScenarioInputs& in)
{
  try {
    in = load_scenario(m.scenario_path);
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(ExitCode::io);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(ExitCode::validation);
  }
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Offshore wind park and HVDC grid expansion toolkit"};
  app.require_subcommand(1);

  RunManifest m;
  std::string topology_path;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--scenario", m.scenario_path, "Scenario JSON file")->required();
    sub->add_option("--out", m.out_dir, "Output directory");
    sub->add_option("--seed", m.seed, "Clustering seed");
    sub->add_option("--jobs", m.jobs, "Worker threads (results do not depend on it)")->check(CLI::PositiveNumber);
    sub->add_option("--rel-gap", m.rel_gap, "Relative MIP gap");
    sub->add_option("--node-limit", m.node_limit, "Branch-and-bound node limit");
    sub->add_option("--co2-mult", m.multipliers, "CO2 price multiplier(s), comma separated")->delimiter(',');
    sub->add_option("--max-dist", m.max_dist_km, "Maximum node-to-converter distance, km");
    sub->add_option("--nrmse-tol", m.nrmse_tolerance, "Temporal clustering nRMSE tolerance");
  };
  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario");
  auto* sites_cmd = app.add_subcommand("cluster-sites", "Converter positions from candidate sites");
  auto* weeks_cmd = app.add_subcommand("cluster-weeks", "Representative weeks from hourly data");
  auto* solve_cmd = app.add_subcommand("solve", "Multi-year run: one expansion solve plus market evaluation");
  auto* sweep_cmd = app.add_subcommand("sweep", "Expansion over ascending CO2 price multipliers");
  auto* single_cmd = app.add_subcommand("single-year-study", "One solve per weather year, then topology clustering");
  auto* eval_cmd = app.add_subcommand("evaluate", "Market evaluation of a given topology");
  for (auto* sub : {validate_cmd, sites_cmd, weeks_cmd, solve_cmd, sweep_cmd, single_cmd, eval_cmd}) common(sub);
  eval_cmd->add_option("--topology", topology_path, "topology.json of a previous run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_code(ExitCode::validation);
  }
  if (sweep_cmd->parsed()) m.mode = RunMode::sweep;
  if (single_cmd->parsed()) m.mode = RunMode::single_year;

  const auto manifest_problems = validate(m);
  if (!manifest_problems.empty()) {
    for (const auto& p : manifest_problems) std::cerr << "error: " << p << "\n";
    return exit_code(ExitCode::validation);
  }

  try {
    if (validate_cmd->parsed()) {
      ScenarioInputs in;
      if (auto code = load(m, in)) return *code;
      const auto problems = validate(in.scenario);
      for (const auto& p : problems) std::cout << p << "\n";
      if (problems.empty()) std::cout << "ok\n";
      return exit_code(problems.empty() ? ExitCode::ok : ExitCode::validation);
    }
    if (sites_cmd->parsed()) {
      ScenarioInputs in;
      if (auto code = load(m, in)) return *code;
      const auto clusters = site_clusters(in, m.max_dist_km.value_or(in.max_dist_km), m.seed);
      const auto path = (std::filesystem::path(m.out_dir) / "clusters.csv").string();
      write_file(path, clusters_to_csv(clusters));
      std::cout << clusters.size() << " clusters -> " << path << "\n";
      return 0;
    }
    if (weeks_cmd->parsed()) {
      ScenarioInputs in;
      if (auto code = load(m, in)) return *code;
      const Scenario s = offshore_scenario(in, site_clusters(in, m.max_dist_km.value_or(in.max_dist_km), m.seed));
      const auto weeks = representative_weeks(in, s, m.nrmse_tolerance.value_or(in.nrmse_tolerance), m.seed);
      const auto path = (std::filesystem::path(m.out_dir) / "weeks.csv").string();
      write_file(path, weeks_to_csv(weeks));
      std::cout << weeks.periods() << " weeks, nRMSE " << fmt_fixed(weeks.achieved_nrmse, 4) << " -> " << path << "\n";
      for (const auto& w : weeks.warnings) std::cerr << "warning: " << w << "\n";
      return 0;
    }
    if (solve_cmd->parsed()) return report(run_multi_year(m));
    if (sweep_cmd->parsed()) return report(run_sweep(m));
    if (single_cmd->parsed()) {
      const auto r = run_single_year_study(m);
      for (std::size_t s = 0; s < r.representatives.medoids.size(); ++s)
        std::cout << "representative " << r.configs[r.representatives.medoids[s]].source << "\n";
      return report(r);
    }
    if (eval_cmd->parsed()) return report(run_evaluate(m, topology_path));
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(ExitCode::io);
  } catch (const domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(ExitCode::validation);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(ExitCode::solver_limit);
  }
  return 0;
}
