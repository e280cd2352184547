#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gtce/geo.hpp"
#include "gtce/kmedoids.hpp"
#include "gtce/scenario_io.hpp"

using namespace gtce;

namespace {

// Square of side `km` centered at (lon, lat), in degrees.
std::vector<GeoPoint> square(double lon, double lat, double km)
{
  const double dlat = km / 2.0 / 111.195;
  const double dlon = dlat / std::cos(lat * M_PI / 180.0);
  return {{lon - dlon, lat - dlat}, {lon + dlon, lat - dlat}, {lon + dlon, lat + dlat}, {lon - dlon, lat + dlat}};
}

}  // namespace

TEST(Haversine, KnownDistances)
{
  EXPECT_DOUBLE_EQ(haversine({4.0, 52.0}, {4.0, 52.0}), 0.0);
  // one degree of latitude
  EXPECT_NEAR(haversine({4.0, 52.0}, {4.0, 53.0}), kEarthRadiusKm * M_PI / 180.0, 1e-9);
  // quarter meridian
  EXPECT_NEAR(haversine({0.0, 0.0}, {0.0, 90.0}), kEarthRadiusKm * M_PI / 2.0, 1e-9);
  EXPECT_DOUBLE_EQ(haversine({1.0, 50.0}, {3.0, 54.0}), haversine({3.0, 54.0}, {1.0, 50.0}));
}

TEST(Polygon, AreaOfSquare)
{
  EXPECT_NEAR(polygon_area_km2(square(3.0, 54.0, 40.0)), 1600.0, 16.0);
}

TEST(Polygon, SelfIntersectionDetected)
{
  auto bowtie = square(3.0, 54.0, 40.0);
  std::swap(bowtie[2], bowtie[3]);
  EXPECT_FALSE(is_simple_polygon(bowtie));
  EXPECT_TRUE(is_simple_polygon(square(3.0, 54.0, 40.0)));
}

TEST(Grid, CapacityMatchesAreaTimesDensity)
{
  CandidateSite site{"s", square(3.0, 54.0, 40.0), 7.0};
  const auto grid = superimpose_grid({site}, 10.0);
  ASSERT_FALSE(grid.nodes.empty());
  const double total =
      std::accumulate(grid.nodes.begin(), grid.nodes.end(), 0.0, [](double a, const GridNode& n) { return a + n.capacity_mw; });
  EXPECT_NEAR(total, polygon_area_km2(site.polygon) * 7.0, 1e-6);
  EXPECT_EQ(grid.nodes.size(), 16u);
}

TEST(Grid, RejectsNonPositiveSpacing)
{
  EXPECT_THROW(superimpose_grid({}, 0.0), domain_error);
}

TEST(SiteClusters, TwoDistantSitesGiveTwoClusters)
{
  const auto grid = superimpose_grid({{"a", square(2.0, 54.0, 30.0), 7.0}, {"b", square(6.0, 55.0, 30.0), 7.0}}, 10.0);
  SiteClusterOptions opt;
  opt.max_dist_km = 70.0;
  const auto clusters = cluster_sites(grid.nodes, opt);
  EXPECT_EQ(clusters.size(), 2u);
}

TEST(SiteClusters, NorthSeaFixtureWithinThreshold)
{
  const auto in = load_scenario(std::string(GTCE_TEST_DATA) + "/north_sea/north_sea_sites.json");
  const auto grid = superimpose_grid(in.scenario.sites, in.grid_spacing_km);
  SiteClusterOptions opt;
  opt.max_dist_km = 70.0;
  const auto clusters = cluster_sites(grid.nodes, opt);
  EXPECT_GE(clusters.size(), 20u);
  EXPECT_LE(clusters.size(), 30u);
  std::vector<int> seen(grid.nodes.size(), 0);
  for (const auto& c : clusters) {
    for (std::size_t id : c.members) {
      ++seen[id];
      EXPECT_LE(haversine(grid.nodes[id].location, c.medoid), 70.0 + 1e-9);
    }
  }
  EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int v) { return v == 1; }));
}

TEST(SiteClusters, UnreachableThresholdReported)
{
  const auto grid = superimpose_grid({{"a", square(2.0, 54.0, 30.0), 7.0}}, 10.0);
  SiteClusterOptions opt;
  opt.max_dist_km = 1e-6;
  // every node its own medoid reaches distance zero
  EXPECT_EQ(cluster_sites(grid.nodes, opt).size(), grid.nodes.size());
}

TEST(KMedoids, MatchesBruteForceOnSmallSets)
{
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    std::vector<double> pts;
    std::uint64_t s = seed * 7919;
    for (int i = 0; i < 9; ++i) {
      s = s * 6364136223846793005ull + 1442695040888963407ull;
      pts.push_back(static_cast<double>(s >> 40) / 1e5);
    }
    const auto dist = DistanceMatrix::build(pts.size(), [&](std::size_t i, std::size_t j) { return std::abs(pts[i] - pts[j]); });
    const auto r = pam(dist, 3, seed);
    double best = 1e300;
    for (std::size_t a = 0; a < pts.size(); ++a)
      for (std::size_t b = a + 1; b < pts.size(); ++b)
        for (std::size_t c = b + 1; c < pts.size(); ++c) {
          double cost = 0.0;
          for (std::size_t i = 0; i < pts.size(); ++i) cost += std::min({dist(i, a), dist(i, b), dist(i, c)});
          best = std::min(best, cost);
        }
    // PAM is a local search; on one-dimensional data it reaches the optimum
    EXPECT_NEAR(r.cost, best, 1e-9) << "seed " << seed;
  }
}

TEST(KMedoids, PinnedPointsStayMedoids)
{
  std::vector<double> pts{0, 1, 2, 10, 11, 12, 20, 21, 22};
  const auto dist = DistanceMatrix::build(pts.size(), [&](std::size_t i, std::size_t j) { return std::abs(pts[i] - pts[j]); });
  const std::vector<std::size_t> pinned{0, 8};
  const auto r = pam(dist, 3, 1, pinned);
  EXPECT_EQ(r.medoids[0], 0u);
  EXPECT_EQ(r.medoids[1], 8u);
  EXPECT_EQ(r.medoids[2], 4u);
}

TEST(KMedoids, SeedDoesNotChangeUniqueOptimum)
{
  std::vector<double> pts{0, 1, 2, 10, 11, 12, 20, 21, 22};
  const auto dist = DistanceMatrix::build(pts.size(), [&](std::size_t i, std::size_t j) { return std::abs(pts[i] - pts[j]); });
  auto a = pam(dist, 3, 1).medoids, b = pam(dist, 3, 99).medoids;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, (std::vector<std::size_t>{1, 4, 7}));
}
