#include "gtce/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gtce/format.hpp"
#include "gtce/kmedoids.hpp"

namespace gtce {

namespace {
constexpr double kDeg = std::numbers::pi / 180.0;
}

double haversine(const GeoPoint& a, const GeoPoint& b)
{
  const double dlat = (b.lat - a.lat) * kDeg;
  const double dlon = (b.lon - a.lon) * kDeg;
  const double s = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(a.lat * kDeg) * std::cos(b.lat * kDeg) * std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(s)));
}

LocalProjection::Xy LocalProjection::forward(const GeoPoint& p) const
{
  return {kEarthRadiusKm * (p.lon - origin.lon) * kDeg * std::cos(origin.lat * kDeg),
          kEarthRadiusKm * (p.lat - origin.lat) * kDeg};
}

GeoPoint LocalProjection::inverse(const Xy& q) const
{
  return {origin.lon + q.x / (kEarthRadiusKm * kDeg * std::cos(origin.lat * kDeg)),
          origin.lat + q.y / (kEarthRadiusKm * kDeg)};
}

LocalProjection projection_for(const std::vector<GeoPoint>& polygon)
{
  if (polygon.empty()) return {};
  double lon_min = polygon[0].lon, lon_max = lon_min, lat_min = polygon[0].lat, lat_max = lat_min;
  for (const auto& p : polygon) {
    lon_min = std::min(lon_min, p.lon);
    lon_max = std::max(lon_max, p.lon);
    lat_min = std::min(lat_min, p.lat);
    lat_max = std::max(lat_max, p.lat);
  }
  return {{(lon_min + lon_max) / 2, (lat_min + lat_max) / 2}};
}

namespace {

std::vector<LocalProjection::Xy> project(const LocalProjection& proj, const std::vector<GeoPoint>& poly)
{
  std::vector<LocalProjection::Xy> ring;
  ring.reserve(poly.size());
  for (const auto& p : poly) ring.push_back(proj.forward(p));
  return ring;
}

double shoelace(const std::vector<LocalProjection::Xy>& ring)
{
  double twice = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const auto& a = ring[i];
    const auto& b = ring[(i + 1) % ring.size()];
    twice += a.x * b.y - b.x * a.y;
  }
  return std::abs(twice) / 2.0;
}

double cross(LocalProjection::Xy o, LocalProjection::Xy a, LocalProjection::Xy b)
{
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(LocalProjection::Xy p, LocalProjection::Xy q, LocalProjection::Xy r)
{
  return std::min(p.x, r.x) <= q.x && q.x <= std::max(p.x, r.x) && std::min(p.y, r.y) <= q.y &&
         q.y <= std::max(p.y, r.y);
}

bool segments_intersect(LocalProjection::Xy p1, LocalProjection::Xy p2, LocalProjection::Xy q1,
                        LocalProjection::Xy q2)
{
  const double d1 = cross(q1, q2, p1), d2 = cross(q1, q2, p2);
  const double d3 = cross(p1, p2, q1), d4 = cross(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  if (d1 == 0 && on_segment(q1, p1, q2)) return true;
  if (d2 == 0 && on_segment(q1, p2, q2)) return true;
  if (d3 == 0 && on_segment(p1, q1, p2)) return true;
  if (d4 == 0 && on_segment(p1, q2, p2)) return true;
  return false;
}

}  // namespace

double polygon_area_km2(const std::vector<GeoPoint>& polygon)
{
  if (polygon.size() < 3) return 0.0;
  return shoelace(project(projection_for(polygon), polygon));
}

bool point_in_polygon(const std::vector<LocalProjection::Xy>& ring, LocalProjection::Xy p)
{
  bool inside = false;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    const auto& a = ring[i];
    const auto& b = ring[j];
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_cross = (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x;
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

bool is_simple_polygon(const std::vector<GeoPoint>& polygon)
{
  const std::size_t n = polygon.size();
  if (n < 3) return false;
  const auto ring = project(projection_for(polygon), polygon);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // adjacent edges share a vertex
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(ring[i], ring[(i + 1) % n], ring[j], ring[(j + 1) % n])) return false;
    }
  }
  return true;
}

GridResult superimpose_grid(const std::vector<CandidateSite>& sites, double spacing_km)
{
  if (!(spacing_km > 0.0)) throw domain_error("superimpose_grid: spacing must be > 0");
  GridResult result;
  for (const auto& site : sites) {
    const auto proj = projection_for(site.polygon);
    const auto ring = project(proj, site.polygon);
    const double area = ring.size() >= 3 ? shoelace(ring) : 0.0;
    if (!(area > 0.0)) {
      result.warnings.push_back("site " + site.id + ": degenerate polygon (zero area), skipped");
      continue;
    }
    double x_min = ring[0].x, x_max = x_min, y_min = ring[0].y, y_max = y_min;
    for (const auto& q : ring) {
      x_min = std::min(x_min, q.x);
      x_max = std::max(x_max, q.x);
      y_min = std::min(y_min, q.y);
      y_max = std::max(y_max, q.y);
    }
    const auto nx = static_cast<long>(std::ceil((x_max - x_min) / spacing_km));
    const auto ny = static_cast<long>(std::ceil((y_max - y_min) / spacing_km));
    const std::size_t first = result.nodes.size();
    for (long iy = 0; iy < ny; ++iy) {
      for (long ix = 0; ix < nx; ++ix) {
        const LocalProjection::Xy center{x_min + (ix + 0.5) * spacing_km, y_min + (iy + 0.5) * spacing_km};
        if (!point_in_polygon(ring, center)) continue;
        GridNode node;
        node.id = result.nodes.size();
        node.location = proj.inverse(center);
        node.site = site.id;
        node.capacity_mw = spacing_km * spacing_km * site.power_density;
        result.nodes.push_back(node);
      }
    }
    const std::size_t count = result.nodes.size() - first;
    if (count == 0) {
      result.warnings.push_back("site " + site.id + ": no grid node inside polygon, spacing too coarse");
      continue;
    }
    const double share = area * site.power_density / static_cast<double>(count);
    for (std::size_t i = first; i < result.nodes.size(); ++i) result.nodes[i].capacity_mw = share;
  }
  return result;
}

std::vector<ConverterCluster> cluster_sites(const std::vector<GridNode>& nodes, const SiteClusterOptions& options)
{
  if (nodes.empty()) throw domain_error("cluster_sites: no nodes");
  if (!(options.max_dist_km > 0.0)) throw domain_error("cluster_sites: max_dist must be > 0");
  const std::size_t n = nodes.size();
  const auto dist = DistanceMatrix::build(n, [&](std::size_t i, std::size_t j) {
    return haversine(nodes[i].location, nodes[j].location);
  });
  std::vector<double> weights;
  if (options.capacity_weighted) {
    for (const auto& node : nodes) weights.push_back(node.capacity_mw);
  }

  for (std::size_t k = 1; k <= n; ++k) {
    const auto pam_result = pam(dist, k, options.seed, {}, weights);
    double worst = 0.0;
    for (std::size_t o = 0; o < n; ++o) worst = std::max(worst, dist(o, pam_result.medoids[pam_result.assignment[o]]));
    if (worst > options.max_dist_km) continue;

    std::vector<ConverterCluster> clusters(k);
    for (std::size_t s = 0; s < k; ++s) {
      clusters[s].id = s;
      clusters[s].medoid_node = nodes[pam_result.medoids[s]].id;
      clusters[s].medoid = nodes[pam_result.medoids[s]].location;
    }
    for (std::size_t o = 0; o < n; ++o) {
      auto& c = clusters[pam_result.assignment[o]];
      c.members.push_back(nodes[o].id);
      c.pooled_gw += nodes[o].capacity_mw / 1000.0;
      c.max_distance_km = std::max(c.max_distance_km, dist(o, pam_result.medoids[pam_result.assignment[o]]));
    }
    // Order clusters west to east so ids are stable and readable.
    std::stable_sort(clusters.begin(), clusters.end(), [](const auto& a, const auto& b) {
      if (a.medoid.lon != b.medoid.lon) return a.medoid.lon < b.medoid.lon;
      return a.medoid.lat < b.medoid.lat;
    });
    for (std::size_t s = 0; s < k; ++s) clusters[s].id = s;
    return clusters;
  }
  throw unreachable_threshold("cluster_sites: threshold unreachable with k <= node count");
}

std::string clusters_to_csv(const std::vector<ConverterCluster>& clusters)
{
  std::ostringstream out;
  out << "id,lon,lat,pooled_gw,member_count,max_distance_km\n";
  for (const auto& c : clusters) {
    out << c.id << ',' << fmt_num(c.medoid.lon) << ',' << fmt_num(c.medoid.lat) << ',' << fmt_num(c.pooled_gw)
        << ',' << c.members.size() << ',' << fmt_num(c.max_distance_km) << '\n';
  }
  return out.str();
}

}  // namespace gtce
