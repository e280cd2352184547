#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gtce/expansion_model.hpp"

namespace gtce {

/// An optimal configuration reduced to what is compared across weather
/// years: symmetric adjacency, arc capacities and park capacities.
struct TopologyConfig {
  std::string source;              // e.g. weather year id
  std::vector<std::string> zones;  // sorted
  std::vector<std::vector<int>> adjacency;         // symmetric 0/1
  std::vector<std::vector<double>> capacity_gw;    // symmetric, built NTC
  std::vector<double> owp_gw;                      // per zone, zero for mainland

  std::size_t zone_index(const std::string& id) const;
  /// Throws domain_error on asymmetry, negative capacity or capacity without
  /// adjacency.
  void check() const;
};

/// Collects the built offshore arcs (steps × step size) and onshore
/// additions of a solved topology over the given zone set.
TopologyConfig to_config(const Topology& topology, std::vector<std::string> zones, double step_gw,
                         const std::string& source);

/// Euclidean distance over [upper-triangle capacities; park capacities],
/// plus `adjacency_weight` per mismatched arc. Throws domain_error on
/// differing zone sets.
double topology_distance(const TopologyConfig& a, const TopologyConfig& b, double adjacency_weight = 0.0);

struct TopologyClustering {
  std::vector<std::size_t> medoids;     // indices into the input, ascending
  std::vector<std::size_t> assignment;  // per config, slot into `medoids`
  double cost = 0.0;
};

/// Seeded PAM; configs are ordered by `source` for tie-breaking, so the
/// nearest-medoid tie goes to the lower source id.
TopologyClustering cluster_topologies(const std::vector<TopologyConfig>& configs, std::size_t k, std::uint64_t seed,
                                      double adjacency_weight = 0.0);

std::string configs_to_json(const std::vector<TopologyConfig>& configs);
std::vector<TopologyConfig> configs_from_json(const std::string& text);
std::string representatives_to_json(const std::vector<TopologyConfig>& configs, const TopologyClustering& clustering);

}  // namespace gtce
