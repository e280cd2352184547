#include "gtce/time_cluster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gtce/format.hpp"
#include "gtce/kmedoids.hpp"

namespace gtce {

double wind_capacity_factor(double speed, const PowerCurve& curve)
{
  if (!(curve.cut_in >= 0.0 && curve.cut_in < curve.rated && curve.rated < curve.cut_out))
    throw std::invalid_argument("power curve requires 0 <= cut_in < rated < cut_out");
  if (speed < 0.0) throw std::invalid_argument("wind speed must be non-negative");
  if (speed < curve.cut_in || speed >= curve.cut_out) return 0.0;
  if (speed >= curve.rated) return 1.0;
  const double ci3 = curve.cut_in * curve.cut_in * curve.cut_in;
  const double r3 = curve.rated * curve.rated * curve.rated;
  return (speed * speed * speed - ci3) / (r3 - ci3);
}

std::optional<std::size_t> WeekMatrix::series_index(const std::string& name) const
{
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

WeekMatrix slice_weeks(const std::vector<HourlySeries>& series)
{
  if (series.empty()) throw std::invalid_argument("slice_weeks: no series");
  const std::size_t len = series.front().values.size();
  for (const auto& s : series) {
    if (s.values.size() != len) throw std::invalid_argument("slice_weeks: series " + s.id + " not aligned");
  }
  if (len < kHoursPerWeek) throw std::invalid_argument("slice_weeks: series shorter than one week");

  std::vector<std::size_t> starts;
  for (std::size_t year_start = 0; year_start < len; year_start += kHoursPerYear) {
    const std::size_t available = std::min(kHoursPerYear, len - year_start);
    const std::size_t blocks = std::min(kWeeksPerYear, available / kHoursPerWeek);
    for (std::size_t b = 0; b < blocks; ++b) starts.push_back(year_start + b * kHoursPerWeek);
  }

  std::vector<std::string> names;
  for (const auto& s : series) names.push_back(s.id);
  WeekMatrix m(starts.size(), kHoursPerWeek, names);
  for (std::size_t w = 0; w < starts.size(); ++w) {
    for (std::size_t h = 0; h < kHoursPerWeek; ++h) {
      for (std::size_t s = 0; s < series.size(); ++s) m.at(w, h, s) = series[s].values[starts[w] + h];
    }
  }
  return m;
}

double nrmse(const WeekMatrix& original, const WeekMatrix& reconstruction, NrmseNormalization norm)
{
  if (original.weeks() != reconstruction.weeks() || original.hours() != reconstruction.hours() ||
      original.series() != reconstruction.series())
    throw std::invalid_argument("nrmse: shape mismatch");
  const auto& a = original.raw();
  const auto& b = reconstruction.raw();
  if (a.empty()) throw std::invalid_argument("nrmse: empty input");
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sq += (a[i] - b[i]) * (a[i] - b[i]);
  const double rmse = std::sqrt(sq / static_cast<double>(a.size()));
  double scale = 0.0;
  if (norm == NrmseNormalization::range) {
    const auto [lo, hi] = std::minmax_element(a.begin(), a.end());
    scale = *hi - *lo;
  } else {
    scale = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(a.size());
  }
  if (!(scale > 0.0)) throw std::invalid_argument("nrmse: degenerate original series (zero range)");
  return rmse / scale;
}

std::optional<std::size_t> RepresentativeWeeks::series_index(const std::string& name) const
{
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series[i] == name) return i;
  }
  return std::nullopt;
}

const std::vector<double>& RepresentativeWeeks::profile(std::size_t period, const std::string& name) const
{
  auto idx = series_index(name);
  if (!idx) throw std::out_of_range("representative weeks carry no series '" + name + "'");
  return profiles.at(period).at(*idx);
}

std::vector<int> apportion_weeks(const std::vector<std::size_t>& member_counts)
{
  const std::size_t k = member_counts.size();
  if (k == 0 || k > kWeeksPerYear) throw clustering_error("apportion_weeks: need between 1 and 52 clusters");
  const double total = static_cast<double>(std::accumulate(member_counts.begin(), member_counts.end(), std::size_t{0}));
  if (!(total > 0.0)) throw clustering_error("apportion_weeks: no members");

  std::vector<double> quota(k);
  std::vector<int> weight(k);
  for (std::size_t i = 0; i < k; ++i) {
    quota[i] = static_cast<double>(member_counts[i]) * static_cast<double>(kWeeksPerYear) / total;
    weight[i] = std::max(1, static_cast<int>(std::floor(quota[i])));
  }
  int remaining = static_cast<int>(kWeeksPerYear) - std::accumulate(weight.begin(), weight.end(), 0);
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  auto remainder = [&](std::size_t i) { return quota[i] - weight[i]; };
  while (remaining != 0) {
    if (remaining > 0) {
      // largest remainder first, ties to the lower index
      std::size_t best = order[0];
      for (std::size_t i : order) {
        if (remainder(i) > remainder(best)) best = i;
      }
      ++weight[best];
      --remaining;
    } else {
      std::size_t best = k;
      for (std::size_t i : order) {
        if (weight[i] <= 1) continue;
        if (best == k || remainder(i) < remainder(best)) best = i;
      }
      --weight[best];
      ++remaining;
    }
  }
  return weight;
}

namespace {

std::vector<std::vector<double>> aggregate_vectors(const WeekMatrix& weeks, const WeekClusterOptions& options)
{
  std::vector<std::size_t> idx;
  if (options.aggregate.empty()) {
    idx.resize(weeks.series());
    std::iota(idx.begin(), idx.end(), 0);
  } else {
    for (const auto& name : options.aggregate) {
      auto i = weeks.series_index(name);
      if (!i) throw std::invalid_argument("cluster_weeks: unknown aggregate series '" + name + "'");
      idx.push_back(*i);
    }
  }
  std::vector<std::vector<double>> out(weeks.weeks());
  for (std::size_t w = 0; w < weeks.weeks(); ++w) {
    if (options.multivariate) {
      out[w].reserve(weeks.hours() * idx.size());
      for (std::size_t s : idx) {
        for (std::size_t h = 0; h < weeks.hours(); ++h) out[w].push_back(weeks.at(w, h, s));
      }
    } else {
      out[w].assign(weeks.hours(), 0.0);
      for (std::size_t h = 0; h < weeks.hours(); ++h) {
        for (std::size_t s : idx) out[w][h] += weeks.at(w, h, s);
      }
    }
  }
  return out;
}

WeekMatrix as_matrix(const std::vector<std::vector<double>>& vectors)
{
  const std::size_t len = vectors.empty() ? 0 : vectors.front().size();
  WeekMatrix m(vectors.size(), len, {"aggregate"});
  for (std::size_t w = 0; w < vectors.size(); ++w) {
    for (std::size_t h = 0; h < len; ++h) m.at(w, h, 0) = vectors[w][h];
  }
  return m;
}

}  // namespace

RepresentativeWeeks cluster_weeks(const WeekMatrix& weeks, const WeekClusterOptions& options)
{
  const std::size_t n = weeks.weeks();
  if (n < 3) throw std::invalid_argument("cluster_weeks: need at least 3 weeks");
  if (!(options.tolerance > 0.0 && options.tolerance < 1.0))
    throw std::invalid_argument("cluster_weeks: tolerance must lie in (0,1)");

  const auto vecs = aggregate_vectors(weeks, options);
  const WeekMatrix original = as_matrix(vecs);

  // Weeks holding the global extremes (first occurrence, week-major order).
  std::size_t min_week = 0, max_week = 0;
  double lo = vecs[0][0], hi = vecs[0][0];
  for (std::size_t w = 0; w < n; ++w) {
    for (double v : vecs[w]) {
      if (v < lo) {
        lo = v;
        min_week = w;
      }
      if (v > hi) {
        hi = v;
        max_week = w;
      }
    }
  }
  std::vector<std::size_t> pinned{min_week};
  if (max_week != min_week) pinned.push_back(max_week);

  const auto dist = DistanceMatrix::build(n, [&](std::size_t i, std::size_t j) {
    double s = 0.0;
    for (std::size_t h = 0; h < vecs[i].size(); ++h) s += (vecs[i][h] - vecs[j][h]) * (vecs[i][h] - vecs[j][h]);
    return std::sqrt(s);
  });

  const std::size_t k_max = std::min(n, kWeeksPerYear);
  KMedoidsResult best;
  double achieved = 0.0;
  bool converged = false;
  for (std::size_t k = 3; k <= k_max; ++k) {
    best = pam(dist, k, options.seed, pinned);
    WeekMatrix recon(n, original.hours(), {"aggregate"});
    for (std::size_t w = 0; w < n; ++w) {
      const std::size_t m = best.medoids[best.assignment[w]];
      for (std::size_t h = 0; h < original.hours(); ++h) recon.at(w, h, 0) = original.at(m, h, 0);
    }
    achieved = nrmse(original, recon, options.normalization);
    if (achieved <= options.tolerance) {
      converged = true;
      break;
    }
  }

  RepresentativeWeeks out;
  out.series = weeks.names();
  out.steps = weeks.hours();
  out.pinned_min_week = min_week;
  out.pinned_max_week = max_week;
  out.achieved_nrmse = achieved;
  out.converged = converged;
  if (!converged) out.warnings.push_back("nRMSE tolerance not reached with 52 medoids");

  // Medoids in chronological order keep exports readable.
  std::vector<std::size_t> slots(best.medoids.size());
  std::iota(slots.begin(), slots.end(), 0);
  std::sort(slots.begin(), slots.end(), [&](std::size_t a, std::size_t b) { return best.medoids[a] < best.medoids[b]; });
  std::vector<std::size_t> counts(best.medoids.size(), 0);
  for (std::size_t w = 0; w < n; ++w) ++counts[best.assignment[w]];
  std::vector<std::size_t> sorted_counts;
  for (std::size_t s : slots) {
    const std::size_t m = best.medoids[s];
    out.source_weeks.push_back(m);
    sorted_counts.push_back(counts[s]);
    std::vector<std::vector<double>> profile(weeks.series(), std::vector<double>(weeks.hours()));
    for (std::size_t sr = 0; sr < weeks.series(); ++sr) {
      for (std::size_t h = 0; h < weeks.hours(); ++h) profile[sr][h] = weeks.at(m, h, sr);
    }
    out.profiles.push_back(std::move(profile));
  }
  out.weights = apportion_weeks(sorted_counts);

  // Energy bookkeeping on the aggregate.
  double rep_energy = 0.0;
  for (std::size_t i = 0; i < out.source_weeks.size(); ++i) {
    const auto& v = vecs[out.source_weeks[i]];
    rep_energy += out.weights[i] * std::accumulate(v.begin(), v.end(), 0.0);
  }
  double all_energy = 0.0;
  for (const auto& v : vecs) all_energy += std::accumulate(v.begin(), v.end(), 0.0);
  const double mean_annual = all_energy * static_cast<double>(kWeeksPerYear) / static_cast<double>(n);
  if (mean_annual != 0.0) {
    out.energy_ratio = rep_energy / mean_annual;
    if (std::abs(out.energy_ratio - 1.0) > 1.2 * options.tolerance)
      out.warnings.push_back("representative energy deviates from mean annual energy by " +
                             fmt_fixed(100.0 * (out.energy_ratio - 1.0), 2) + " %");
  }
  return out;
}

RepresentativeWeeks coarsen(const RepresentativeWeeks& weeks, std::size_t stride)
{
  if (stride == 0 || weeks.steps % stride != 0)
    throw std::invalid_argument("coarsen: stride must divide the period length");
  if (stride == 1) return weeks;
  RepresentativeWeeks out = weeks;
  out.steps = weeks.steps / stride;
  out.hours_per_step = weeks.hours_per_step * static_cast<double>(stride);
  for (auto& period : out.profiles) {
    for (auto& series : period) {
      std::vector<double> reduced(out.steps, 0.0);
      for (std::size_t t = 0; t < out.steps; ++t) {
        for (std::size_t j = 0; j < stride; ++j) reduced[t] += series[t * stride + j];
        reduced[t] /= static_cast<double>(stride);
      }
      series = std::move(reduced);
    }
  }
  return out;
}

std::string weeks_to_csv(const RepresentativeWeeks& weeks)
{
  std::ostringstream out;
  out << "# hours_per_step," << fmt_num(weeks.hours_per_step) << "\n";
  out << "week,weight,source_week,step";
  for (const auto& s : weeks.series) out << ',' << s;
  out << '\n';
  for (std::size_t p = 0; p < weeks.periods(); ++p) {
    for (std::size_t t = 0; t < weeks.steps; ++t) {
      out << p << ',' << weeks.weights[p] << ',' << (p < weeks.source_weeks.size() ? weeks.source_weeks[p] : p) << ','
          << t;
      for (std::size_t s = 0; s < weeks.series.size(); ++s) out << ',' << fmt_num(weeks.profiles[p][s][t]);
      out << '\n';
    }
  }
  return out.str();
}

namespace {

std::vector<std::string> split_csv(const std::string& line)
{
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
    out.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

RepresentativeWeeks weeks_from_csv(const std::string& text)
{
  RepresentativeWeeks out;
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto cells = split_csv(line.substr(1));
      if (cells.size() == 2 && cells[0].find("hours_per_step") != std::string::npos)
        out.hours_per_step = std::stod(cells[1]);
      continue;
    }
    auto cells = split_csv(line);
    if (!header_seen) {
      if (cells.size() < 4 || cells[0] != "week") throw std::invalid_argument("weeks csv: bad header");
      out.series.assign(cells.begin() + 4, cells.end());
      header_seen = true;
      continue;
    }
    if (cells.size() != 4 + out.series.size()) throw std::invalid_argument("weeks csv: ragged row");
    const auto p = static_cast<std::size_t>(std::stoul(cells[0]));
    const auto t = static_cast<std::size_t>(std::stoul(cells[3]));
    if (p == out.periods()) {
      out.weights.push_back(std::stoi(cells[1]));
      out.source_weeks.push_back(std::stoul(cells[2]));
      out.profiles.emplace_back(out.series.size());
    }
    if (p + 1 != out.periods()) throw std::invalid_argument("weeks csv: periods out of order");
    for (std::size_t s = 0; s < out.series.size(); ++s) {
      auto& v = out.profiles[p][s];
      if (v.size() != t) throw std::invalid_argument("weeks csv: steps out of order");
      v.push_back(std::stod(cells[4 + s]));
    }
  }
  out.steps = out.profiles.empty() || out.series.empty() ? 0 : out.profiles[0][0].size();
  return out;
}

}  // namespace gtce
