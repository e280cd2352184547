#include <gtest/gtest.h>

#include <map>
#include <set>
#include <random>

#include "gtce/topology.hpp"

using namespace gtce;

namespace {

const std::vector<std::string> kZones = {"A", "B", "OBZ1", "OBZ2"};

TopologyConfig make(const std::string& source, double ab_obz1, double ob1_ob2, double owp1, double owp2)
{
  Topology t;
  if (ab_obz1 > 0) t.arcs.push_back({"OBZ1", "A", static_cast<int>(ab_obz1), true});
  if (ob1_ob2 > 0) t.arcs.push_back({"OBZ1", "OBZ2", static_cast<int>(ob1_ob2), true});
  t.owp_gw["OBZ1"] = owp1;
  t.owp_gw["OBZ2"] = owp2;
  return to_config(t, kZones, 1.0, source);
}

std::vector<TopologyConfig> random_configs(std::size_t n, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::vector<TopologyConfig> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(make("y" + std::to_string(100 + i), static_cast<double>(rng() % 5), static_cast<double>(rng() % 4),
                       static_cast<double>(rng() % 7) * 0.5, static_cast<double>(rng() % 3)));
  }
  return out;
}

}  // namespace

TEST(TopologyDistance, MetricBasics)
{
  const auto x = make("x", 3, 0, 2.0, 0.0);
  EXPECT_EQ(topology_distance(x, x), 0.0);
  const auto y = make("y", 3, 2, 2.0, 0.0);
  EXPECT_DOUBLE_EQ(topology_distance(x, y), 2.0);
  EXPECT_DOUBLE_EQ(topology_distance(x, y, 0.5), 2.5);
  const auto cs = random_configs(12, 3);
  for (const auto& a : cs)
    for (const auto& b : cs) {
      EXPECT_DOUBLE_EQ(topology_distance(a, b), topology_distance(b, a));
      for (const auto& c : cs) EXPECT_LE(topology_distance(a, c), topology_distance(a, b) + topology_distance(b, c) + 1e-12);
    }
}

TEST(TopologyDistance, ZoneMismatchThrows)
{
  auto a = make("a", 1, 0, 1.0, 0.0);
  auto b = to_config({}, {"A", "OBZ1"}, 1.0, "b");
  EXPECT_THROW(topology_distance(a, b), domain_error);
}

TEST(TopologyConfig, InvariantsAreChecked)
{
  auto c = make("c", 2, 0, 1.0, 0.0);
  c.adjacency[0][2] = 0;
  EXPECT_THROW(c.check(), domain_error);
  auto d = make("d", 2, 0, 1.0, 0.0);
  d.capacity_gw[0][2] = 0.0;
  EXPECT_THROW(d.check(), domain_error);
}

TEST(ClusterTopologies, EveryConfigItsOwnMedoid)
{
  const auto cs = random_configs(6, 9);
  const auto r = cluster_topologies(cs, cs.size(), 1);
  ASSERT_EQ(r.medoids.size(), cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i) EXPECT_EQ(r.medoids[r.assignment[i]], i);
}

TEST(ClusterTopologies, SingleMedoidMinimisesTotalDistance)
{
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto cs = random_configs(15, seed);
    const auto r = cluster_topologies(cs, 1, seed);
    double best = 1e300;
    for (const auto& m : cs) {
      double total = 0.0;
      for (const auto& c : cs) total += topology_distance(m, c);
      best = std::min(best, total);
    }
    double got = 0.0;
    for (const auto& c : cs) got += topology_distance(cs[r.medoids[0]], c);
    EXPECT_NEAR(got, best, 1e-9);
  }
}

TEST(ClusterTopologies, RecoversPlantedArchetypes)
{
  // 21 years around three archetypes: none, radial, meshed
  std::mt19937_64 rng(21);
  std::vector<TopologyConfig> cs;
  std::vector<int> planted;
  for (int y = 0; y < 21; ++y) {
    const int kind = y % 3;
    const double jitter = 0.5 * static_cast<double>(rng() % 2);
    if (kind == 0) cs.push_back(make("y" + std::to_string(1990 + y), 0, 0, jitter, 0.0));
    if (kind == 1) cs.push_back(make("y" + std::to_string(1990 + y), 6, 0, 6.0 + jitter, 0.0));
    if (kind == 2) cs.push_back(make("y" + std::to_string(1990 + y), 12, 6, 12.0 + jitter, 6.0));
    planted.push_back(kind);
  }
  const auto r = cluster_topologies(cs, 3, 7);
  std::map<int, std::size_t> label_of;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    auto [it, fresh] = label_of.emplace(planted[i], r.assignment[i]);
    EXPECT_EQ(it->second, r.assignment[i]) << cs[i].source;
  }
  EXPECT_EQ(label_of.size(), 3u);
  std::set<std::size_t> distinct;
  for (auto& [k, v] : label_of) distinct.insert(v);
  EXPECT_EQ(distinct.size(), 3u);
}

TEST(ClusterTopologies, DeterministicAndMembers)
{
  const auto cs = random_configs(21, 5);
  const auto a = cluster_topologies(cs, 3, 42);
  const auto b = cluster_topologies(cs, 3, 42);
  EXPECT_EQ(a.medoids, b.medoids);
  EXPECT_EQ(a.assignment, b.assignment);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const double own = topology_distance(cs[i], cs[a.medoids[a.assignment[i]]]);
    for (std::size_t m : a.medoids) EXPECT_LE(own, topology_distance(cs[i], cs[m]) + 1e-12);
  }
  EXPECT_THROW(cluster_topologies(cs, 0, 1), domain_error);
  EXPECT_THROW(cluster_topologies(cs, 22, 1), domain_error);
}

TEST(ClusterTopologies, IdenticalConfigsCollapse)
{
  std::vector<TopologyConfig> cs;
  for (int y = 0; y < 4; ++y) cs.push_back(make("y" + std::to_string(y), 2, 0, 2.0, 0.0));
  const auto r = cluster_topologies(cs, 3, 1);
  for (std::size_t m : r.medoids) EXPECT_EQ(topology_distance(cs[m], cs[r.medoids[0]]), 0.0);
  EXPECT_EQ(r.cost, 0.0);
}

TEST(TopologyJson, RoundTrip)
{
  const auto cs = random_configs(4, 11);
  const auto text = configs_to_json(cs);
  const auto back = configs_from_json(text);
  ASSERT_EQ(back.size(), cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i) EXPECT_EQ(topology_distance(cs[i], back[i], 1.0), 0.0);
  EXPECT_EQ(configs_to_json(back), text);
  const auto reps = representatives_to_json(cs, cluster_topologies(cs, 2, 1));
  EXPECT_NE(reps.find("members"), std::string::npos);
  EXPECT_THROW(configs_from_json("[{"), domain_error);
}
