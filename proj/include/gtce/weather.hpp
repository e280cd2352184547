#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gtce/scenario.hpp"
#include "gtce/time_cluster.hpp"

namespace gtce {

struct WeatherSite {
  std::string id;
  GeoPoint location;
  bool offshore = true;
};

struct SyntheticWeatherConfig {
  int years = 21;
  std::uint64_t seed = 2024;
  std::vector<WeatherSite> sites;
  double offshore_mean_speed = 9.8;   // m/s
  double onshore_mean_speed = 6.2;    // m/s
  double speed_sigma = 3.6;           // m/s, synoptic variability
  double year_sigma = 0.5;            // m/s, inter-annual anomaly
  double correlation_km = 600.0;      // e-folding length of the spatial correlation
};

/// Deterministic multi-year hourly weather. Emits, per site, a wind speed
/// series `wind:<id>` (m/s) and, for onshore sites, a solar capacity factor
/// series `pv:<id>`. Uses only raw engine output so results are identical
/// across standard libraries.
std::vector<HourlySeries> synthetic_weather(const SyntheticWeatherConfig& config);

/// Hourly load profile (GW) over `hours` hours whose 8760-hour mean energy
/// equals `annual_twh`.
std::vector<double> synthetic_load(double annual_twh, std::size_t hours, std::uint64_t seed);

/// Portable standard normal stream (Box-Muller over mt19937_64 raw output).
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed);
  double next();
  double uniform();

 private:
  std::uint64_t state_[4];
  bool has_spare_ = false;
  double spare_ = 0.0;
  std::uint64_t raw();
};

}  // namespace gtce
