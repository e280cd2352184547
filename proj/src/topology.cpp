#include "gtce/topology.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "gtce/kmedoids.hpp"

namespace gtce {

using nlohmann::json;

std::size_t TopologyConfig::zone_index(const std::string& id) const
{
  auto it = std::find(zones.begin(), zones.end(), id);
  if (it == zones.end()) throw domain_error("zone " + id + " not in topology config " + source);
  return static_cast<std::size_t>(it - zones.begin());
}

void TopologyConfig::check() const
{
  const std::size_t n = zones.size();
  if (adjacency.size() != n || capacity_gw.size() != n || owp_gw.size() != n)
    throw domain_error("topology config " + source + " has inconsistent dimensions");
  for (std::size_t i = 0; i < n; ++i) {
    if (adjacency[i].size() != n || capacity_gw[i].size() != n)
      throw domain_error("topology config " + source + " has inconsistent dimensions");
    if (owp_gw[i] < 0.0) throw domain_error("negative park capacity in " + source);
    for (std::size_t j = 0; j < n; ++j) {
      if (adjacency[i][j] != adjacency[j][i] || capacity_gw[i][j] != capacity_gw[j][i])
        throw domain_error("topology config " + source + " is not symmetric");
      if (adjacency[i][j] != 0 && adjacency[i][j] != 1) throw domain_error("adjacency must be binary in " + source);
      if (capacity_gw[i][j] < 0.0) throw domain_error("negative arc capacity in " + source);
      if (capacity_gw[i][j] > 0.0 && adjacency[i][j] == 0)
        throw domain_error("capacity on an absent arc " + zones[i] + "-" + zones[j] + " in " + source);
    }
  }
}

TopologyConfig to_config(const Topology& topology, std::vector<std::string> zones, double step_gw,
                         const std::string& source)
{
  std::sort(zones.begin(), zones.end());
  TopologyConfig c;
  c.source = source;
  c.zones = std::move(zones);
  const std::size_t n = c.zones.size();
  c.adjacency.assign(n, std::vector<int>(n, 0));
  c.capacity_gw.assign(n, std::vector<double>(n, 0.0));
  c.owp_gw.assign(n, 0.0);
  auto connect = [&](const std::string& from, const std::string& to, double gw) {
    const std::size_t a = c.zone_index(from), b = c.zone_index(to);
    c.adjacency[a][b] = c.adjacency[b][a] = 1;
    c.capacity_gw[a][b] += gw;
    c.capacity_gw[b][a] = c.capacity_gw[a][b];
  };
  for (const auto& arc : topology.arcs) {
    if (arc.built) connect(arc.from, arc.to, arc.steps * step_gw);
  }
  for (const auto& corr : topology.corridors) {
    if (corr.built) connect(corr.from, corr.to, corr.added_gw);
  }
  for (const auto& [zone, gw] : topology.owp_gw) c.owp_gw[c.zone_index(zone)] = gw;
  c.check();
  return c;
}

double topology_distance(const TopologyConfig& a, const TopologyConfig& b, double adjacency_weight)
{
  if (a.zones != b.zones) throw domain_error("topology configs " + a.source + " and " + b.source + " differ in zones");
  double sum = 0.0;
  int mismatches = 0;
  const std::size_t n = a.zones.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = a.capacity_gw[i][j] - b.capacity_gw[i][j];
      sum += d * d;
      if (a.adjacency[i][j] != b.adjacency[i][j]) ++mismatches;
    }
    const double d = a.owp_gw[i] - b.owp_gw[i];
    sum += d * d;
  }
  return std::sqrt(sum) + adjacency_weight * mismatches;
}

TopologyClustering cluster_topologies(const std::vector<TopologyConfig>& configs, std::size_t k, std::uint64_t seed,
                                      double adjacency_weight)
{
  if (k < 1) throw domain_error("number of representative topologies must be at least 1");
  if (k > configs.size()) throw domain_error("more representatives requested than configurations");
  std::vector<std::size_t> order(configs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return configs[x].source < configs[y].source; });
  const auto dist = DistanceMatrix::build(configs.size(), [&](std::size_t i, std::size_t j) {
    return topology_distance(configs[order[i]], configs[order[j]], adjacency_weight);
  });
  const auto r = pam(dist, k, seed);

  TopologyClustering out;
  out.cost = r.cost;
  for (std::size_t m : r.medoids) out.medoids.push_back(order[m]);
  std::sort(out.medoids.begin(), out.medoids.end());
  out.assignment.assign(configs.size(), 0);
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const std::size_t medoid = order[r.medoids[r.assignment[i]]];
    out.assignment[order[i]] =
        static_cast<std::size_t>(std::find(out.medoids.begin(), out.medoids.end(), medoid) - out.medoids.begin());
  }
  return out;
}

namespace {

json config_json(const TopologyConfig& c)
{
  json arcs = json::array();
  for (std::size_t i = 0; i < c.zones.size(); ++i) {
    for (std::size_t j = i + 1; j < c.zones.size(); ++j) {
      if (c.adjacency[i][j]) arcs.push_back({{"from", c.zones[i]}, {"to", c.zones[j]}, {"gw", c.capacity_gw[i][j]}});
    }
  }
  json owp = json::object();
  for (std::size_t i = 0; i < c.zones.size(); ++i) {
    if (c.owp_gw[i] > 0.0) owp[c.zones[i]] = c.owp_gw[i];
  }
  return {{"source", c.source}, {"zones", c.zones}, {"arcs", arcs}, {"owp_gw", owp}};
}

TopologyConfig config_from(const json& j)
{
  TopologyConfig c;
  c.source = j.at("source").get<std::string>();
  c.zones = j.at("zones").get<std::vector<std::string>>();
  const std::size_t n = c.zones.size();
  c.adjacency.assign(n, std::vector<int>(n, 0));
  c.capacity_gw.assign(n, std::vector<double>(n, 0.0));
  c.owp_gw.assign(n, 0.0);
  const json arcs = j.value("arcs", json::array());
  const json owp = j.value("owp_gw", json::object());
  for (const auto& a : arcs) {
    const std::size_t x = c.zone_index(a.at("from").get<std::string>()), y = c.zone_index(a.at("to").get<std::string>());
    c.adjacency[x][y] = c.adjacency[y][x] = 1;
    c.capacity_gw[x][y] = c.capacity_gw[y][x] = a.at("gw").get<double>();
  }
  for (const auto& [zone, gw] : owp.items()) c.owp_gw[c.zone_index(zone)] = gw.get<double>();
  c.check();
  return c;
}

}  // namespace

std::string configs_to_json(const std::vector<TopologyConfig>& configs)
{
  json arr = json::array();
  for (const auto& c : configs) arr.push_back(config_json(c));
  return arr.dump(2) + "\n";
}

std::vector<TopologyConfig> configs_from_json(const std::string& text)
{
  json arr;
  try {
    arr = json::parse(text);
  } catch (const json::exception& e) {
    throw domain_error(std::string("topology configs: ") + e.what());
  }
  std::vector<TopologyConfig> out;
  try {
    for (const auto& j : arr) out.push_back(config_from(j));
  } catch (const json::exception& e) {
    throw domain_error(std::string("topology configs: ") + e.what());
  }
  return out;
}

std::string representatives_to_json(const std::vector<TopologyConfig>& configs, const TopologyClustering& clustering)
{
  json arr = json::array();
  for (std::size_t s = 0; s < clustering.medoids.size(); ++s) {
    json members = json::array();
    for (std::size_t i = 0; i < configs.size(); ++i) {
      if (clustering.assignment[i] == s) members.push_back(configs[i].source);
    }
    json rep = config_json(configs[clustering.medoids[s]]);
    rep["members"] = members;
    arr.push_back(rep);
  }
  return arr.dump(2) + "\n";
}

}  // namespace gtce
