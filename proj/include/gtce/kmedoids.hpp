#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace gtce {

/// Dense symmetric distance matrix.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

  template <typename Fn>
  static DistanceMatrix build(std::size_t n, Fn&& dist)
  {
    DistanceMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double v = dist(i, j);
        m.d_[i * n + j] = v;
        m.d_[j * n + i] = v;
      }
    }
    return m;
  }

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

struct KMedoidsResult {
  std::vector<std::size_t> medoids;     // point indices; pinned ones first
  std::vector<std::size_t> assignment;  // per point, slot into `medoids`
  double cost = 0.0;                    // weighted sum of distances to assigned medoid
  int swaps = 0;
};

/// Seeded permutation used to break ties between equally good candidates.
std::vector<std::size_t> seeded_order(std::size_t n, std::uint64_t seed);

/// PAM k-medoids: greedy BUILD followed by best-improvement SWAP until no
/// swap lowers the cost. `pinned` points are always medoids and are never
/// swapped out. Optional `weights` scale each point's contribution.
/// Ties in BUILD and SWAP go to the earlier point in the seeded order;
/// assignment ties go to the medoid with the lower point index.
KMedoidsResult pam(const DistanceMatrix& dist, std::size_t k, std::uint64_t seed,
                   std::span<const std::size_t> pinned = {},
                   std::span<const double> weights = {});

/// Assigns every point to its nearest medoid (ties to the lower point index).
std::vector<std::size_t> assign_nearest(const DistanceMatrix& dist,
                                        std::span<const std::size_t> medoids);

}  // namespace gtce
