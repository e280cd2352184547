#include "gtce/weather.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gtce/geo.hpp"

namespace gtce {

namespace {

std::uint64_t splitmix64(std::uint64_t& x)
{
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

NormalStream::NormalStream(std::uint64_t seed)
{
  for (auto& s : state_) s = splitmix64(seed);
}

std::uint64_t NormalStream::raw()
{
  // xoshiro256**
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double NormalStream::uniform()
{
  return (static_cast<double>(raw() >> 11) + 0.5) * 0x1.0p-53;
}

double NormalStream::next()
{
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(kTwoPi * u2);
  has_spare_ = true;
  return r * std::cos(kTwoPi * u2);
}

namespace {

// Lower Cholesky factor of a small SPD matrix.
std::vector<std::vector<double>> cholesky(std::vector<std::vector<double>> a)
{
  const std::size_t n = a.size();
  std::vector<std::vector<double>> l(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a[i][j];
      for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
      if (i == j) {
        l[i][i] = std::sqrt(std::max(s, 1e-12));
      } else {
        l[i][j] = s / l[j][j];
      }
    }
  }
  return l;
}

double day_of_year(std::size_t hour) { return static_cast<double>(hour % kHoursPerYear) / 24.0; }

double solar_elevation_sin(double lat_deg, std::size_t hour)
{
  const double doy = day_of_year(hour);
  const double decl = 23.44 * std::numbers::pi / 180.0 * std::sin(kTwoPi * (doy - 81.0) / 365.0);
  const double lat = lat_deg * std::numbers::pi / 180.0;
  const double hour_angle = kTwoPi * (static_cast<double>(hour % 24) + 0.5 - 12.0) / 24.0;
  return std::sin(lat) * std::sin(decl) + std::cos(lat) * std::cos(decl) * std::cos(hour_angle);
}

}  // namespace

std::vector<HourlySeries> synthetic_weather(const SyntheticWeatherConfig& config)
{
  if (config.years < 1) throw std::invalid_argument("synthetic_weather: years must be >= 1");
  const std::size_t n_sites = config.sites.size();
  const std::size_t hours = static_cast<std::size_t>(config.years) * kHoursPerYear;

  std::vector<std::vector<double>> cov(n_sites, std::vector<double>(n_sites, 1.0));
  for (std::size_t i = 0; i < n_sites; ++i) {
    for (std::size_t j = 0; j < n_sites; ++j) {
      if (i != j)
        cov[i][j] = std::exp(-haversine(config.sites[i].location, config.sites[j].location) / config.correlation_km);
    }
  }
  const auto chol = cholesky(cov);

  NormalStream rng(config.seed);
  const double phi = std::exp(-1.0 / 40.0);  // synoptic persistence, ~40 h
  const double innovation = std::sqrt(1.0 - phi * phi);
  const double cloud_phi = std::exp(-1.0 / 18.0);
  const double cloud_innovation = std::sqrt(1.0 - cloud_phi * cloud_phi);

  std::vector<HourlySeries> out;
  for (const auto& site : config.sites) {
    out.push_back({"wind:" + site.id, "2000-01-01T00:00", std::vector<double>(hours)});
  }
  std::vector<std::size_t> pv_index(n_sites, 0);
  for (std::size_t i = 0; i < n_sites; ++i) {
    if (config.sites[i].offshore) continue;
    pv_index[i] = out.size();
    out.push_back({"pv:" + config.sites[i].id, "2000-01-01T00:00", std::vector<double>(hours)});
  }

  std::vector<double> state(n_sites, 0.0), cloud(n_sites, 0.0), year_anomaly(n_sites, 0.0), z(n_sites);
  for (std::size_t t = 0; t < hours; ++t) {
    if (t % kHoursPerYear == 0) {
      const double common = rng.next();
      for (std::size_t i = 0; i < n_sites; ++i) year_anomaly[i] = config.year_sigma * (0.8 * common + 0.6 * rng.next());
    }
    for (std::size_t i = 0; i < n_sites; ++i) z[i] = rng.next();
    const double season = std::cos(kTwoPi * (day_of_year(t) - 15.0) / 365.0);
    for (std::size_t i = 0; i < n_sites; ++i) {
      double shock = 0.0;
      for (std::size_t j = 0; j <= i; ++j) shock += chol[i][j] * z[j];
      state[i] = phi * state[i] + innovation * shock;
      const auto& site = config.sites[i];
      const double mean = site.offshore ? config.offshore_mean_speed : config.onshore_mean_speed;
      const double skewed = state[i] + 0.15 * (state[i] * state[i] - 1.0);
      const double diurnal = site.offshore ? 0.0 : 0.6 * std::sin(kTwoPi * (static_cast<double>(t % 24) - 9.0) / 24.0);
      const double speed = mean * (1.0 + 0.2 * season) + year_anomaly[i] + diurnal + config.speed_sigma * skewed;
      out[i].values[t] = std::max(0.0, speed);

      if (!site.offshore) {
        cloud[i] = cloud_phi * cloud[i] + cloud_innovation * rng.next();
        const double clear = std::max(0.0, solar_elevation_sin(site.location.lat, t));
        const double cover = 1.0 / (1.0 + std::exp(-1.5 * cloud[i] - 0.4 * season));
        out[pv_index[i]].values[t] = std::min(1.0, 0.85 * clear * (1.0 - 0.75 * cover));
      }
    }
  }
  return out;
}

std::vector<double> synthetic_load(double annual_twh, std::size_t hours, std::uint64_t seed)
{
  if (!(annual_twh >= 0.0)) throw std::invalid_argument("synthetic_load: annual energy must be >= 0");
  NormalStream rng(seed);
  std::vector<double> load(hours);
  double noise = 0.0;
  double sum = 0.0;
  for (std::size_t t = 0; t < hours; ++t) {
    noise = 0.9 * noise + 0.02 * rng.next();
    const double season = 0.15 * std::cos(kTwoPi * (day_of_year(t) - 15.0) / 365.0);
    const double hod = static_cast<double>(t % 24);
    const double daily = 0.12 * std::sin(kTwoPi * (hod - 7.0) / 24.0) + 0.05 * std::sin(2.0 * kTwoPi * (hod - 4.0) / 24.0);
    const double weekend = (t / 24) % 7 >= 5 ? -0.08 : 0.0;
    load[t] = std::max(0.05, 1.0 + season + daily + weekend + noise);
    sum += load[t];
  }
  if (hours == 0 || sum <= 0.0) return load;
  const double mean_gw = annual_twh * 1000.0 / static_cast<double>(kHoursPerYear);
  const double scale = mean_gw * static_cast<double>(hours) / sum;
  for (double& v : load) v *= scale;
  return load;
}

}  // namespace gtce
