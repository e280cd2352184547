#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <map>

#include <json.hpp>

#include "gtce/pipeline.hpp"

using namespace gtce;
namespace fs = std::filesystem;

namespace {

const std::string kToy = std::string(GTCE_TEST_DATA) + "/toy/toy_sweep.json";
const std::string kDesk = std::string(GTCE_TEST_DATA) + "/north_sea/desk.json";

fs::path scratch(const std::string& name)
{
  const fs::path p = fs::temp_directory_path() / ("gtce_test_" + name);
  fs::remove_all(p);
  return p;
}

// Relative path -> content of every file below `root` except log.txt.
std::map<std::string, std::string> snapshot(const fs::path& root)
{
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file() || e.path().filename() == "log.txt") continue;
    out[fs::relative(e.path(), root).string()] = read_file(e.path().string());
  }
  return out;
}

RunManifest toy_sweep(const fs::path& out, unsigned jobs)
{
  RunManifest m;
  m.scenario_path = kToy;
  m.mode = RunMode::sweep;
  m.multipliers = {1.0, 2.0, 3.0};
  m.rel_gap = 1e-9;
  m.out_dir = out.string();
  m.jobs = jobs;
  return m;
}

}  // namespace

TEST(Manifest, ValidationCatchesBadValues)
{
  RunManifest m;
  m.mode = RunMode::sweep;
  m.multipliers = {0.0};
  EXPECT_FALSE(validate(m).empty());
  m.multipliers = {2.0, 1.0};
  EXPECT_FALSE(validate(m).empty());
  m.multipliers = {1.0, 1.5};
  EXPECT_TRUE(validate(m).empty());
  m.mode = RunMode::multi_year;
  EXPECT_FALSE(validate(m).empty());
}

TEST(Manifest, RunIdIgnoresJobsAndOutput)
{
  RunManifest a = toy_sweep("x", 1), b = toy_sweep("y", 4);
  EXPECT_EQ(run_id(a, "text"), run_id(b, "text"));
  EXPECT_NE(run_id(a, "text"), run_id(a, "other text"));
  b.seed = 2;
  EXPECT_NE(run_id(a, "text"), run_id(b, "text"));
}

TEST(Pipeline, SweepBundlesAreIdenticalForAnyJobCount)
{
  const auto one = scratch("jobs1"), three = scratch("jobs3");
  const auto a = run_sweep(toy_sweep(one, 1));
  const auto b = run_sweep(toy_sweep(three, 3));
  ASSERT_EQ(a.code, ExitCode::ok);
  ASSERT_EQ(b.code, ExitCode::ok);
  EXPECT_EQ(a.run_id, b.run_id);
  const auto x = snapshot(one), y = snapshot(three);
  EXPECT_GT(x.size(), 10u);
  EXPECT_EQ(x, y);
  EXPECT_TRUE(fs::exists(one / a.run_id / "log.txt"));
}

TEST(Pipeline, SweepBuildsMoreOffshoreWindAtHigherPrices)
{
  const auto out = scratch("sweep");
  const auto r = run_sweep(toy_sweep(out, 1));
  ASSERT_EQ(r.rows.size(), 3u);
  for (std::size_t i = 1; i < r.rows.size(); ++i) EXPECT_GE(r.rows[i].owp_gw, r.rows[i - 1].owp_gw - 1e-9);
  EXPECT_TRUE(fs::exists(out / r.run_id / "summary.csv"));
  for (const char* f : {"model.lp", "solution.json", "mcp.csv", "surplus.csv", "balance.csv", "topology.json",
                        "duration_OBZ1.csv", "summary.json"})
    EXPECT_TRUE(fs::exists(out / r.run_id / "x2" / f)) << f;
}

TEST(Pipeline, MissingScenarioIsIoError)
{
  RunManifest m;
  m.scenario_path = "/nonexistent/scenario.json";
  m.out_dir = scratch("missing").string();
  EXPECT_EQ(run_multi_year(m).code, ExitCode::io);
}

TEST(Pipeline, NonPositiveMultiplierIsValidationError)
{
  auto m = toy_sweep(scratch("zero"), 1);
  m.multipliers = {0.0, 1.0};
  EXPECT_EQ(run_sweep(m).code, ExitCode::validation);
}

TEST(Pipeline, DispatchCostMatchesExpansionOpex)
{
  const auto in = load_scenario(kToy);
  Scenario s = in.scenario;
  s.co2_multiplier = 3.0;
  const auto weeks = representative_weeks(in, s, in.nrmse_tolerance, 1);
  CaseOptions opt;
  opt.rel_gap = 1e-9;
  const auto r = solve_case(s, weeks, opt, "x3");
  ASSERT_EQ(r.code, ExitCode::ok) << r.error;
  ASSERT_TRUE(r.evaluated);
  EXPECT_GT(r.topology.total_owp_gw(), 0.0);
  // market figures are scaled from 52 weeks to the full year
  const double opex = r.solution.breakdown.opex * kAnnualScale;
  EXPECT_NEAR(annual_dispatch_cost(r.off), opex, 1e-6 * opex);
  EXPECT_TRUE(r.violations.empty());
}

TEST(Pipeline, TopologyJsonRoundTrip)
{
  const auto in = load_scenario(kToy);
  Scenario s = in.scenario;
  s.co2_multiplier = 3.0;
  const auto weeks = representative_weeks(in, s, in.nrmse_tolerance, 1);
  CaseOptions opt;
  opt.evaluate = false;
  const auto r = solve_case(s, weeks, opt, "x3");
  ASSERT_EQ(r.code, ExitCode::ok);
  const auto text = topology_to_json(r.topology, s, {});
  const auto back = topology_from_json(text);
  EXPECT_EQ(topology_to_json(back, s, {}), text);
}

TEST(Pipeline, SingleYearStudyClustersTopologies)
{
  auto doc = nlohmann::json::parse(read_file(kDesk));
  doc["weather"]["synthetic"]["years"] = 3;
  const auto dir = scratch("single_year");
  fs::create_directories(dir);
  const auto path = dir / "desk3.json";
  write_file(path.string(), doc.dump(1));

  RunManifest m;
  m.scenario_path = path.string();
  m.mode = RunMode::single_year;
  m.out_dir = (dir / "out").string();
  m.jobs = 2;
  const auto r = run_single_year_study(m);
  ASSERT_EQ(r.code, ExitCode::ok) << (r.failures.empty() ? "" : r.failures.front());
  ASSERT_EQ(r.configs.size(), 3u);
  EXPECT_EQ(r.representatives.medoids.size(), 3u);
  EXPECT_TRUE(fs::exists(fs::path(r.dir) / "configs.json"));
  EXPECT_TRUE(fs::exists(fs::path(r.dir) / "representatives.json"));
  EXPECT_EQ(configs_to_json(configs_from_json(read_file((fs::path(r.dir) / "configs.json").string()))),
            read_file((fs::path(r.dir) / "configs.json").string()));
}
