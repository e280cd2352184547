#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gtce/scenario.hpp"

namespace gtce {

inline constexpr double kEarthRadiusKm = 6371.0;

/// Great-circle distance in km.
double haversine(const GeoPoint& a, const GeoPoint& b);

/// Local equirectangular projection around a reference point, in km.
struct LocalProjection {
  GeoPoint origin;
  struct Xy {
    double x = 0.0;
    double y = 0.0;
  };
  Xy forward(const GeoPoint& p) const;
  GeoPoint inverse(const Xy& q) const;
};

LocalProjection projection_for(const std::vector<GeoPoint>& polygon);
double polygon_area_km2(const std::vector<GeoPoint>& polygon);
bool point_in_polygon(const std::vector<LocalProjection::Xy>& ring, LocalProjection::Xy p);
bool is_simple_polygon(const std::vector<GeoPoint>& polygon);

struct GridNode {
  std::size_t id = 0;
  GeoPoint location;
  std::string site;
  double capacity_mw = 0.0;
};

struct GridResult {
  std::vector<GridNode> nodes;
  std::vector<std::string> warnings;
};

/// Places nodes on a regular grid of `spacing_km` over each site (cell
/// centers inside the polygon). Each site's node shares are scaled so that
/// they sum to area times power density.
GridResult superimpose_grid(const std::vector<CandidateSite>& sites, double spacing_km);

struct ConverterCluster {
  std::size_t id = 0;
  GeoPoint medoid;
  std::size_t medoid_node = 0;
  std::vector<std::size_t> members;  // node ids
  double pooled_gw = 0.0;
  double max_distance_km = 0.0;
};

class unreachable_threshold : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SiteClusterOptions {
  double max_dist_km = 70.0;
  std::uint64_t seed = 1;
  bool capacity_weighted = false;
};

/// Smallest k (scanning k = 1, 2, ...) whose PAM clustering keeps every node
/// within `max_dist_km` of its medoid.
std::vector<ConverterCluster> cluster_sites(const std::vector<GridNode>& nodes,
                                            const SiteClusterOptions& options);

std::string clusters_to_csv(const std::vector<ConverterCluster>& clusters);

}  // namespace gtce
