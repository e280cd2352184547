#include "gtce/scenario_io.hpp"

#include <array>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gtce/format.hpp"

namespace gtce {

using nlohmann::json;
namespace fs = std::filesystem;

std::size_t ScenarioInputs::years() const
{
  if (weather.empty()) return 0;
  return weather.front().values.size() / kHoursPerYear;
}

std::string read_file(const std::string& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content)
{
  const fs::path p(path);
  std::error_code ec;
  if (p.has_parent_path()) fs::create_directories(p.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot write " + path);
  out << content;
  if (!out) throw io_error("cannot write " + path);
}

std::string hour_timestamp(int start_year, std::size_t h)
{
  // Synthetic years have 8760 hours; February never has a 29th.
  static constexpr std::array<int, 12> days{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  const int year = start_year + static_cast<int>(h / kHoursPerYear);
  std::size_t hour = h % kHoursPerYear;
  std::size_t day = hour / 24;
  int month = 0;
  while (day >= static_cast<std::size_t>(days[month])) day -= static_cast<std::size_t>(days[month++]);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02zu:00", year, month + 1, static_cast<int>(day) + 1, hour % 24);
  return buf;
}

namespace {

std::vector<std::string> split(const std::string& line)
{
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
    out.push_back(cell);
  }
  return out;
}

double parse_double(const std::string& cell, std::size_t line)
{
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (ec != std::errc() || ptr != end)
    throw domain_error("series csv line " + std::to_string(line) + ": not a number '" + cell + "'");
  return v;
}

}  // namespace

std::vector<HourlySeries> read_series_csv(const std::string& text)
{
  std::istringstream in(text);
  std::string line;
  std::vector<HourlySeries> out;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    const auto cells = split(line);
    if (!header) {
      if (cells.size() < 2) throw domain_error("series csv: header needs a timestamp and at least one series");
      for (std::size_t c = 1; c < cells.size(); ++c) out.push_back({cells[c], "", {}});
      header = true;
      continue;
    }
    if (cells.size() != out.size() + 1) throw domain_error("series csv line " + std::to_string(lineno) + ": ragged row");
    for (std::size_t c = 1; c < cells.size(); ++c) {
      if (out[c - 1].values.empty()) out[c - 1].start = cells[0];
      out[c - 1].values.push_back(parse_double(cells[c], lineno));
    }
  }
  if (!header) throw domain_error("series csv: empty file");
  return out;
}

std::string write_series_csv(const std::vector<HourlySeries>& series)
{
  std::ostringstream out;
  out << "timestamp";
  for (const auto& s : series) out << ',' << s.id;
  out << '\n';
  const std::size_t n = series.empty() ? 0 : series.front().values.size();
  int start_year = 2000;
  if (!series.empty() && series.front().start.size() >= 4) start_year = std::stoi(series.front().start.substr(0, 4));
  for (std::size_t h = 0; h < n; ++h) {
    out << hour_timestamp(start_year, h);
    for (const auto& s : series) out << ',' << fmt_num(s.values.at(h));
    out << '\n';
  }
  return out.str();
}

namespace {

template <typename T>
void get_if(const json& j, const char* key, T& target)
{
  if (j.contains(key)) target = j.at(key).get<T>();
}

GeoPoint point(const json& j)
{
  if (j.is_array()) {
    if (j.size() != 2) throw domain_error("coordinates must be [lon, lat]");
    return {j[0].get<double>(), j[1].get<double>()};
  }
  return {j.at("lon").get<double>(), j.at("lat").get<double>()};
}

void parse_costs(const json& j, CostTable& c)
{
  static const std::set<std::string> known{
      "c_b_fix",        "c_b_on_varL",  "c_b_off_varL",      "c_b_on_varLP", "c_b_off_varLP", "c_c_fix",
      "c_c_varP_acdc",  "c_c_varP_dcdc", "c_hvdc_varOM",     "c_ntc_varL",   "c_ntc_varLP",   "c_owp_varP",
      "c_owp_varOM",    "rho_owp",      "i_owp",             "i_hvdc",       "n_owp",         "n_hvdc",
      "fuel_price",     "c_co2",        "step_gw",           "landing_cap_gw", "max_steps_per_arc", "voll",
      "hydro_availability"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) throw domain_error("costs: unknown field " + key);
  }
  get_if(j, "c_b_fix", c.c_b_fix);
  get_if(j, "c_b_on_varL", c.c_b_on_varL);
  get_if(j, "c_b_off_varL", c.c_b_off_varL);
  get_if(j, "c_b_on_varLP", c.c_b_on_varLP);
  get_if(j, "c_b_off_varLP", c.c_b_off_varLP);
  get_if(j, "c_c_fix", c.c_c_fix);
  get_if(j, "c_c_varP_acdc", c.c_c_varP_acdc);
  get_if(j, "c_c_varP_dcdc", c.c_c_varP_dcdc);
  get_if(j, "c_hvdc_varOM", c.c_hvdc_varOM);
  get_if(j, "c_ntc_varL", c.c_ntc_varL);
  get_if(j, "c_ntc_varLP", c.c_ntc_varLP);
  get_if(j, "c_owp_varP", c.c_owp_varP);
  get_if(j, "c_owp_varOM", c.c_owp_varOM);
  get_if(j, "rho_owp", c.rho_owp);
  get_if(j, "i_owp", c.i_owp);
  get_if(j, "i_hvdc", c.i_hvdc);
  get_if(j, "n_owp", c.n_owp);
  get_if(j, "n_hvdc", c.n_hvdc);
  get_if(j, "c_co2", c.c_co2);
  get_if(j, "step_gw", c.step_gw);
  get_if(j, "landing_cap_gw", c.landing_cap_gw);
  get_if(j, "max_steps_per_arc", c.max_steps_per_arc);
  get_if(j, "voll", c.voll);
  get_if(j, "hydro_availability", c.hydro_availability);
  if (j.contains("fuel_price")) {
    for (const auto& [fuel, price] : j.at("fuel_price").items()) c.fuel_price[fuel_from_string(fuel)] = price.get<double>();
  }
}

WeatherSite weather_site(const json& j)
{
  WeatherSite s;
  s.id = j.at("id").get<std::string>();
  s.location = point(j.contains("location") ? j.at("location") : j);
  s.offshore = j.value("offshore", true);
  return s;
}

std::string resolve(const std::string& base_dir, const std::string& path)
{
  const fs::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (fs::path(base_dir) / p).string();
}

void parse_document(const json& doc, const std::string& base_dir, ScenarioInputs& in)
{
  Scenario& s = in.scenario;
  s.name = doc.value("name", "scenario");

  for (const auto& z : doc.at("zones")) {
    Zone zone;
    zone.id = z.at("id").get<std::string>();
    const std::string kind = z.value("kind", "mainland");
    if (kind == "mainland") zone.kind = ZoneKind::mainland;
    else if (kind == "offshore") zone.kind = ZoneKind::offshore;
    else throw domain_error("zone " + zone.id + ": kind must be mainland or offshore");
    zone.landing_cap_gw = z.value("landing_cap_gw", 0.0);
    zone.location = point(z.contains("location") ? z.at("location") : z);
    s.zones.push_back(zone);
  }

  if (doc.contains("costs")) parse_costs(doc.at("costs"), s.costs);
  const auto factors = default_emission_factors();
  for (const auto& u : doc.value("units", json::array())) {
    ThermalUnit unit;
    unit.id = u.at("id").get<std::string>();
    unit.zone = u.at("zone").get<std::string>();
    unit.capacity_gw = u.at("capacity_gw").get<double>();
    unit.efficiency = u.value("efficiency", 1.0);
    unit.fuel = fuel_from_string(u.at("fuel").get<std::string>());
    unit.emission_factor = u.contains("emission_factor") ? u.at("emission_factor").get<double>() : factors.at(unit.fuel);
    unit.om_cost = u.value("om_cost", 0.0);
    s.units.push_back(unit);
  }

  const json renewables = doc.value("renewables", json::object());
  for (const auto& [zone, r] : renewables.items()) {
    RenewableFleet f;
    get_if(r, "onshore_wind_gw", f.onshore_wind_gw);
    get_if(r, "offshore_wind_gw", f.offshore_wind_gw);
    get_if(r, "pv_gw", f.pv_gw);
    s.renewables[zone] = f;
  }

  for (const auto& site : doc.value("sites", json::array())) {
    CandidateSite c;
    c.id = site.at("id").get<std::string>();
    c.power_density = site.value("power_density", s.costs.rho_owp);
    for (const auto& v : site.at("polygon")) c.polygon.push_back(point(v));
    s.sites.push_back(c);
  }

  if (doc.contains("ntc")) {
    const std::size_t n = s.zones.size();
    s.ntc.assign(n, std::vector<double>(n, 0.0));
    for (const auto& e : doc.at("ntc")) {
      const auto a = s.zone_index(e.at("from").get<std::string>());
      const auto b = s.zone_index(e.at("to").get<std::string>());
      if (!a || !b) throw domain_error("ntc entry references an unknown zone");
      const double gw = e.at("gw").get<double>();
      s.ntc[*a][*b] = gw;
      if (!e.value("directed", false)) s.ntc[*b][*a] = gw;
    }
  }

  for (const auto& a : doc.value("offshore_arcs", json::array())) {
    ArcSpec arc;
    arc.from = a.at("from").get<std::string>();
    arc.to = a.at("to").get<std::string>();
    if (a.contains("distance_km")) arc.distance_km = a.at("distance_km").get<double>();
    if (a.contains("onshore_share")) arc.onshore_share = a.at("onshore_share").get<double>();
    s.offshore_arcs.push_back(arc);
  }
  if (doc.contains("arc_rule")) {
    const auto& r = doc.at("arc_rule");
    get_if(r, "max_length_km", s.arc_rule.max_length_km);
    get_if(r, "mainland", s.arc_rule.mainland);
    get_if(r, "offshore_to_offshore", s.arc_rule.offshore_to_offshore);
    get_if(r, "onshore_tail_km", s.arc_rule.onshore_tail_km);
  }
  for (const auto& c : doc.value("corridors", json::array())) {
    OnshoreCorridor corr;
    corr.from = c.at("from").get<std::string>();
    corr.to = c.at("to").get<std::string>();
    get_if(c, "max_added_gw", corr.max_added_gw);
    if (c.contains("distance_km")) corr.distance_km = c.at("distance_km").get<double>();
    s.corridors.push_back(corr);
  }
  get_if(doc, "max_available_gw", s.max_available_gw);
  get_if(doc, "co2_multiplier", s.co2_multiplier);

  // Weather.
  if (doc.contains("power_curve")) {
    const auto& pc = doc.at("power_curve");
    get_if(pc, "cut_in", in.power_curve.cut_in);
    get_if(pc, "rated", in.power_curve.rated);
    get_if(pc, "cut_out", in.power_curve.cut_out);
  }
  if (doc.contains("weather")) {
    const auto& w = doc.at("weather");
    for (const auto& site : w.value("sites", json::array())) in.weather_sites.push_back(weather_site(site));
    if (w.contains("csv")) {
      in.weather = read_series_csv(read_file(resolve(base_dir, w.at("csv").get<std::string>())));
    } else if (w.contains("synthetic")) {
      const auto& g = w.at("synthetic");
      SyntheticWeatherConfig cfg;
      get_if(g, "years", cfg.years);
      get_if(g, "seed", cfg.seed);
      get_if(g, "offshore_mean_speed", cfg.offshore_mean_speed);
      get_if(g, "onshore_mean_speed", cfg.onshore_mean_speed);
      get_if(g, "speed_sigma", cfg.speed_sigma);
      get_if(g, "year_sigma", cfg.year_sigma);
      get_if(g, "correlation_km", cfg.correlation_km);
      cfg.sites = in.weather_sites;
      in.weather = synthetic_weather(cfg);
    } else {
      throw domain_error("weather: expected csv or synthetic");
    }
  }

  // Load.
  if (doc.contains("load")) {
    const auto& l = doc.at("load");
    if (l.contains("csv")) {
      for (auto& series : read_series_csv(read_file(resolve(base_dir, l.at("csv").get<std::string>()))))
        s.load[series.id] = std::move(series.values);
    } else if (l.contains("synthetic")) {
      const auto& g = l.at("synthetic");
      std::size_t hours = in.weather.empty() ? kHoursPerYear : in.weather.front().values.size();
      get_if(g, "hours", hours);
      const std::uint64_t seed = g.value("seed", std::uint64_t{7});
      std::uint64_t k = 0;
      for (const auto& [zone, twh] : g.at("annual_twh").items()) {
        s.load[zone] = synthetic_load(twh.get<double>(), hours, seed + 1000 * k++);
      }
    } else {
      throw domain_error("load: expected csv or synthetic");
    }
  }

  if (doc.contains("representative_weeks")) {
    const auto& w = doc.at("representative_weeks");
    try {
      in.weeks = weeks_from_csv(read_file(resolve(base_dir, w.at("csv").get<std::string>())));
    } catch (const std::invalid_argument& e) {
      throw domain_error(e.what());
    }
  }

  if (doc.contains("clustering")) {
    const auto& c = doc.at("clustering");
    get_if(c, "grid_spacing_km", in.grid_spacing_km);
    get_if(c, "max_dist_km", in.max_dist_km);
    get_if(c, "nrmse_tolerance", in.nrmse_tolerance);
    get_if(c, "multivariate", in.multivariate);
    get_if(c, "coarsen_stride", in.coarsen_stride);
    get_if(c, "representative_topologies", in.representative_topologies);
    const std::string norm = c.value("normalization", "range");
    if (norm == "range") in.normalization = NrmseNormalization::range;
    else if (norm == "mean") in.normalization = NrmseNormalization::mean;
    else throw domain_error("clustering.normalization must be range or mean");
  }
  if (doc.contains("sweep")) get_if(doc.at("sweep"), "multipliers", in.sweep_multipliers);
}

}  // namespace

ScenarioInputs parse_scenario(const std::string& json_text, const std::string& base_dir)
{
  ScenarioInputs in;
  in.base_dir = base_dir;
  try {
    parse_document(json::parse(json_text), base_dir, in);
  } catch (const json::exception& e) {
    throw domain_error(std::string("scenario: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw domain_error(std::string("scenario: ") + e.what());
  }
  if (!in.weather.empty()) {
    const std::size_t n = in.weather.front().values.size();
    for (const auto& w : in.weather) {
      if (w.values.size() != n) throw domain_error("weather series " + w.id + " differs in length");
    }
  }
  if (in.coarsen_stride == 0) throw domain_error("clustering.coarsen_stride must be >= 1");
  return in;
}

ScenarioInputs load_scenario(const std::string& path)
{
  const std::string text = read_file(path);
  return parse_scenario(text, fs::path(path).parent_path().string());
}

}  // namespace gtce
