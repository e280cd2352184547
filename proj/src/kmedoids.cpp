#include "gtce/kmedoids.hpp"

#include <algorithm>
#include <limits>
#include <random>
#include <stdexcept>

namespace gtce {

std::vector<std::size_t> seeded_order(std::size_t n, std::uint64_t seed)
{
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  // Fisher-Yates with raw engine output; std::shuffle and the std
  // distributions are not reproducible across standard libraries.
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

std::vector<std::size_t> assign_nearest(const DistanceMatrix& dist,
                                        std::span<const std::size_t> medoids)
{
  std::vector<std::size_t> out(dist.size(), 0);
  for (std::size_t o = 0; o < dist.size(); ++o) {
    std::size_t best = 0;
    for (std::size_t s = 1; s < medoids.size(); ++s) {
      const double a = dist(o, medoids[s]);
      const double b = dist(o, medoids[best]);
      if (a < b || (a == b && medoids[s] < medoids[best])) best = s;
    }
    out[o] = best;
  }
  return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Nearest {
  std::vector<std::size_t> slot;
  std::vector<double> first;
  std::vector<double> second;
};

Nearest nearest_two(const DistanceMatrix& dist, const std::vector<std::size_t>& medoids)
{
  const std::size_t n = dist.size();
  Nearest nn{std::vector<std::size_t>(n, 0), std::vector<double>(n, kInf), std::vector<double>(n, kInf)};
  for (std::size_t o = 0; o < n; ++o) {
    for (std::size_t s = 0; s < medoids.size(); ++s) {
      const double d = dist(o, medoids[s]);
      if (d < nn.first[o] || (d == nn.first[o] && medoids[s] < medoids[nn.slot[o]])) {
        nn.second[o] = nn.first[o];
        nn.first[o] = d;
        nn.slot[o] = s;
      } else if (d < nn.second[o]) {
        nn.second[o] = d;
      }
    }
  }
  return nn;
}

}  // namespace

KMedoidsResult pam(const DistanceMatrix& dist, std::size_t k, std::uint64_t seed,
                   std::span<const std::size_t> pinned, std::span<const double> weights)
{
  const std::size_t n = dist.size();
  if (k < 1) throw std::invalid_argument("pam: k must be >= 1");
  if (k > n) throw std::invalid_argument("pam: k exceeds point count");
  if (!weights.empty() && weights.size() != n) throw std::invalid_argument("pam: weight count mismatch");

  std::vector<std::size_t> medoids;
  std::vector<char> is_medoid(n, 0);
  for (std::size_t p : pinned) {
    if (p >= n) throw std::invalid_argument("pam: pinned index out of range");
    if (!is_medoid[p]) {
      medoids.push_back(p);
      is_medoid[p] = 1;
    }
  }
  if (medoids.size() > k) throw std::invalid_argument("pam: more pinned medoids than k");
  const std::size_t n_pinned = medoids.size();
  auto w = [&](std::size_t o) { return weights.empty() ? 1.0 : weights[o]; };
  const auto order = seeded_order(n, seed);

  // BUILD
  std::vector<double> nearest(n, kInf);
  for (std::size_t o = 0; o < n; ++o) {
    for (std::size_t m : medoids) nearest[o] = std::min(nearest[o], dist(o, m));
  }
  while (medoids.size() < k) {
    std::size_t best = n;
    double best_score = kInf;
    for (std::size_t x : order) {
      if (is_medoid[x]) continue;
      // new total cost after adding x; minimizing it equals maximizing gain
      double total = 0.0;
      for (std::size_t o = 0; o < n; ++o) total += w(o) * std::min(nearest[o], dist(o, x));
      if (total < best_score) {
        best_score = total;
        best = x;
      }
    }
    medoids.push_back(best);
    is_medoid[best] = 1;
    for (std::size_t o = 0; o < n; ++o) nearest[o] = std::min(nearest[o], dist(o, best));
  }

  // SWAP
  KMedoidsResult result;
  std::vector<double> delta(k);
  for (int iter = 0; iter < 10000; ++iter) {
    const Nearest nn = nearest_two(dist, medoids);
    double current = 0.0;
    for (std::size_t o = 0; o < n; ++o) current += w(o) * nn.first[o];
    const double threshold = -1e-12 * std::max(1.0, current);

    double best_delta = 0.0;
    std::size_t best_slot = k;
    std::size_t best_x = n;
    for (std::size_t x : order) {
      if (is_medoid[x]) continue;
      double shared = 0.0;
      std::fill(delta.begin(), delta.end(), 0.0);
      for (std::size_t o = 0; o < n; ++o) {
        const double dox = dist(o, x);
        const double gain = std::min(0.0, dox - nn.first[o]);
        shared += w(o) * gain;
        const double ds = nn.second[o];
        delta[nn.slot[o]] += w(o) * ((std::min(dox, ds) - nn.first[o]) - gain);
      }
      for (std::size_t s = n_pinned; s < k; ++s) {
        const double d = shared + delta[s];
        if (d < best_delta) {
          best_delta = d;
          best_slot = s;
          best_x = x;
        }
      }
    }
    if (best_slot == k || !(best_delta < threshold)) break;
    is_medoid[medoids[best_slot]] = 0;
    medoids[best_slot] = best_x;
    is_medoid[best_x] = 1;
    ++result.swaps;
  }

  result.medoids = medoids;
  result.assignment = assign_nearest(dist, medoids);
  for (std::size_t o = 0; o < n; ++o) result.cost += w(o) * dist(o, medoids[result.assignment[o]]);
  return result;
}

}  // namespace gtce
