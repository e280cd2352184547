#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gtce/scenario.hpp"
#include "gtce/time_cluster.hpp"
#include "gtce/weather.hpp"

namespace gtce {

/// File missing, unreadable or unwritable.
class io_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a run needs besides the scenario proper: where the weather
/// comes from and how the inputs are clustered.
struct ScenarioInputs {
  Scenario scenario;
  std::string base_dir;  // relative paths resolve against this

  // Hourly weather: wind speeds `wind:<site>` (m/s), solar factors `pv:<site>`.
  std::vector<HourlySeries> weather;
  std::vector<WeatherSite> weather_sites;
  PowerCurve power_curve;

  // Pre-clustered representative weeks; when present, temporal clustering is
  // skipped and the scenario's hourly data is not needed.
  std::optional<RepresentativeWeeks> weeks;

  double grid_spacing_km = 10.0;
  double max_dist_km = 70.0;
  double nrmse_tolerance = 0.10;
  NrmseNormalization normalization = NrmseNormalization::range;
  bool multivariate = false;
  std::size_t coarsen_stride = 1;  // steps per model step after clustering
  std::vector<double> sweep_multipliers;
  std::size_t representative_topologies = 3;

  /// Number of whole weather years available.
  std::size_t years() const;
};

/// Parses a scenario document. Throws domain_error on schema violations and
/// io_error if a referenced file cannot be read.
ScenarioInputs parse_scenario(const std::string& json_text, const std::string& base_dir);
ScenarioInputs load_scenario(const std::string& path);

/// CSV with a header row, an ISO-8601 hour timestamp in the first column and
/// one numeric column per series.
std::vector<HourlySeries> read_series_csv(const std::string& text);
std::string write_series_csv(const std::vector<HourlySeries>& series);

std::string read_file(const std::string& path);
/// Creates parent directories as needed.
void write_file(const std::string& path, const std::string& content);

/// ISO-8601 timestamp of hour `h` after `start` ("YYYY-MM-DDTHH:00").
std::string hour_timestamp(int start_year, std::size_t h);

}  // namespace gtce
