#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gtce/expansion_model.hpp"
#include "gtce/geo.hpp"
#include "gtce/market.hpp"
#include "gtce/scenario_io.hpp"
#include "gtce/topology.hpp"

namespace gtce {

enum class RunMode { multi_year, single_year, sweep };

const char* to_string(RunMode mode);

/// Exit status of a run; also the process exit code of the CLI.
enum class ExitCode : int { ok = 0, validation = 1, infeasible = 2, solver_limit = 3, io = 4 };

struct RunManifest {
  std::string scenario_path;
  RunMode mode = RunMode::multi_year;
  std::vector<double> multipliers;  // empty: the scenario's own
  std::uint64_t seed = 1;
  double rel_gap = 1e-4;
  std::size_t node_limit = 200000;
  std::optional<double> nrmse_tolerance;  // overrides the scenario file
  std::optional<double> max_dist_km;      // overrides the scenario file
  std::string out_dir = "out";
  unsigned jobs = 1;  // never affects results
};

/// Violations of the manifest invariants (positive ascending multipliers,
/// positive tolerances).
std::vector<std::string> validate(const RunManifest& manifest);

/// Canonical JSON of everything that determines results: the manifest
/// minus output directory and job count, plus a hash of the scenario file.
std::string manifest_json(const RunManifest& manifest, const std::string& scenario_text);
std::string run_id(const RunManifest& manifest, const std::string& scenario_text);

/// Converter clusters from the candidate sites (empty without sites).
std::vector<ConverterCluster> site_clusters(const ScenarioInputs& inputs, double max_dist_km, std::uint64_t seed);

/// Scenario with one offshore zone per cluster, arcs from the arc rule.
Scenario offshore_scenario(const ScenarioInputs& inputs, const std::vector<ConverterCluster>& clusters);

/// Hourly model inputs: `load:<zone>`, offshore capacity factors
/// `cf:<obz>`, fleet factors `cf:<zone>:<tech>` (each zone takes the nearest
/// weather site), and `res:total`, the aggregate available feed-in in GW.
/// With `year`, only that weather year.
std::vector<HourlySeries> model_series(const ScenarioInputs& inputs, const Scenario& scenario,
                                       std::optional<std::size_t> year = std::nullopt);

/// Representative weeks clustered on `res:total` (or given by the scenario
/// file), coarsened by the scenario's stride.
RepresentativeWeeks representative_weeks(const ScenarioInputs& inputs, const Scenario& scenario, double tolerance,
                                         std::uint64_t seed, std::optional<std::size_t> year = std::nullopt);

/// One solved and evaluated price point or weather year.
struct CaseResult {
  std::string label;
  double multiplier = 1.0;
  double co2_price = 0.0;
  ExitCode code = ExitCode::ok;
  std::string error;
  ExpansionModel model;
  Solution solution;
  Topology topology;
  std::vector<std::string> violations;
  bool evaluated = false;
  MarketOutcome off;
  MarketOutcome ref;
  SurplusReport surplus;
  std::vector<std::string> log;  // untimed lines
};

struct CaseOptions {
  double rel_gap = 1e-4;
  std::size_t node_limit = 200000;
  unsigned jobs = 1;
  bool evaluate = true;
};

/// Builds, solves, checks and (optionally) evaluates one case. Failures are
/// recorded in the result, never thrown.
CaseResult solve_case(const Scenario& scenario, const RepresentativeWeeks& weeks, const CaseOptions& options,
                      const std::string& label);

/// Writes model.lp, solution.json, mcp.csv, surplus.csv, balance.csv,
/// duration_<owp>.csv, topology.json and summary.json into `dir`.
void write_bundle(const std::string& dir, const CaseResult& result, const RepresentativeWeeks& weeks,
                  const std::vector<ConverterCluster>& clusters, const std::string& manifest);

std::string topology_to_json(const Topology& topology, const Scenario& scenario,
                             const std::vector<ConverterCluster>& clusters);
Topology topology_from_json(const std::string& text);

struct SweepRow {
  double multiplier = 0.0;
  double co2_price = 0.0;
  std::string status;
  double owp_gw = 0.0;
  int arcs = 0;
  double objective = 0.0;
  double opex = 0.0;
};

struct RunReport {
  std::string run_id;
  std::string dir;
  ExitCode code = ExitCode::ok;
  std::vector<SweepRow> rows;          // sweep and multi-year
  std::vector<TopologyConfig> configs;  // single-year
  TopologyClustering representatives;   // single-year
  std::vector<std::string> failures;
};

std::string sweep_csv(const std::vector<SweepRow>& rows);

RunReport run_multi_year(const RunManifest& manifest);
RunReport run_sweep(const RunManifest& manifest);
RunReport run_single_year_study(const RunManifest& manifest);
/// Market evaluation of a given topology against the no-offshore reference.
RunReport run_evaluate(const RunManifest& manifest, const std::string& topology_path);

}  // namespace gtce
