#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gtce {

inline constexpr std::size_t kHoursPerWeek = 168;
inline constexpr std::size_t kWeeksPerYear = 52;
inline constexpr std::size_t kHoursPerYear = 8760;
inline constexpr double kAnnualScale = 8760.0 / 8736.0;

struct PowerCurve {
  double cut_in = 3.0;
  double rated = 12.0;
  double cut_out = 25.0;
};

/// Capacity factor of a turbine at wind speed `speed` (m/s): cubic ramp
/// between cut-in and rated, full output up to cut-out, zero beyond.
double wind_capacity_factor(double speed, const PowerCurve& curve);

struct HourlySeries {
  std::string id;
  std::string start;  // ISO-8601 timestamp of the first hour
  std::vector<double> values;
};

/// Weeks × hours × series cube, row-major in that order.
class WeekMatrix {
 public:
  WeekMatrix() = default;
  WeekMatrix(std::size_t weeks, std::size_t hours, std::vector<std::string> series)
      : weeks_(weeks), hours_(hours), names_(std::move(series)), data_(weeks * hours * names_.size(), 0.0)
  {
  }

  std::size_t weeks() const { return weeks_; }
  std::size_t hours() const { return hours_; }
  std::size_t series() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }
  std::optional<std::size_t> series_index(const std::string& name) const;

  double& at(std::size_t w, std::size_t h, std::size_t s) { return data_[(w * hours_ + h) * names_.size() + s]; }
  double at(std::size_t w, std::size_t h, std::size_t s) const { return data_[(w * hours_ + h) * names_.size() + s]; }
  const std::vector<double>& raw() const { return data_; }

 private:
  std::size_t weeks_ = 0;
  std::size_t hours_ = 0;
  std::vector<std::string> names_;
  std::vector<double> data_;
};

/// Splits aligned hourly series into consecutive 168-hour blocks, taking 52
/// blocks per 8760-hour year and dropping the trailing hours of each year.
WeekMatrix slice_weeks(const std::vector<HourlySeries>& series);

enum class NrmseNormalization { range, mean };

double nrmse(const WeekMatrix& original, const WeekMatrix& reconstruction,
             NrmseNormalization norm = NrmseNormalization::range);

/// Representative periods with integer occurrence weights. Profiles are
/// stored per period as [series][step]; one step lasts `hours_per_step` h.
struct RepresentativeWeeks {
  std::vector<std::string> series;
  std::size_t steps = kHoursPerWeek;
  double hours_per_step = 1.0;
  std::vector<std::vector<std::vector<double>>> profiles;
  std::vector<int> weights;
  std::vector<std::size_t> source_weeks;
  std::size_t pinned_min_week = 0;
  std::size_t pinned_max_week = 0;
  double achieved_nrmse = 0.0;
  bool converged = true;
  double energy_ratio = 1.0;
  std::vector<std::string> warnings;

  std::size_t periods() const { return weights.size(); }
  std::optional<std::size_t> series_index(const std::string& name) const;
  /// Profile of a named series in one period; throws if the series is absent.
  const std::vector<double>& profile(std::size_t period, const std::string& name) const;
  bool has_series(const std::string& name) const { return series_index(name).has_value(); }
};

struct WeekClusterOptions {
  double tolerance = 0.10;
  std::uint64_t seed = 1;
  NrmseNormalization normalization = NrmseNormalization::range;
  bool multivariate = false;
  // Series summed into the clustering aggregate; empty means all series.
  std::vector<std::string> aggregate;
};

class clustering_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Medoid weeks whose reconstruction meets the nRMSE tolerance. The weeks
/// holding the global minimum and maximum of the aggregate are always
/// medoids; at least three medoids are returned.
RepresentativeWeeks cluster_weeks(const WeekMatrix& weeks, const WeekClusterOptions& options);

/// Largest-remainder apportionment of 52 weeks over cluster member counts,
/// every weight at least one.
std::vector<int> apportion_weeks(const std::vector<std::size_t>& member_counts);

/// Averages consecutive blocks of `stride` steps; each step then lasts
/// `stride` times as long. `stride` must divide the period length.
RepresentativeWeeks coarsen(const RepresentativeWeeks& weeks, std::size_t stride);

std::string weeks_to_csv(const RepresentativeWeeks& weeks);
RepresentativeWeeks weeks_from_csv(const std::string& text);

}  // namespace gtce
