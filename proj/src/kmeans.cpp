#include "rsot/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace rsot {

namespace {

std::size_t nearest_centroid(const Point& p, const PointList& centroids) {
  std::size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d2 = squared_distance(p, centroids[c]);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = c;
    }
  }
  return best;
}

PointList seed_plus_plus(const PointList& points, std::size_t k,
                         std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PointList centroids;
  centroids.reserve(k);
  centroids.push_back(
      points[static_cast<std::size_t>(unit(rng) * static_cast<double>(points.size())) %
             points.size()]);
  std::vector<double> d2(points.size());
  while (centroids.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const Point& c : centroids)
        best = std::min(best, squared_distance(points[i], c));
      d2[i] = best;
      total += best;
    }
    std::size_t pick = 0;
    if (total > 0.0) {
      const double u = unit(rng) * total;
      double acc = 0.0;
      pick = points.size() - 1;
      for (std::size_t i = 0; i < points.size(); ++i) {
        acc += d2[i];
        if (u < acc) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<std::size_t>(unit(rng) * static_cast<double>(points.size())) %
             points.size();
    }
    centroids.push_back(points[pick]);
  }
  return centroids;
}

double bbox_diagonal(const PointList& points) {
  Point lo = points[0], hi = points[0];
  for (const Point& p : points)
    for (int c = 0; c < 3; ++c) {
      lo[static_cast<std::size_t>(c)] = std::min(lo[static_cast<std::size_t>(c)], p[static_cast<std::size_t>(c)]);
      hi[static_cast<std::size_t>(c)] = std::max(hi[static_cast<std::size_t>(c)], p[static_cast<std::size_t>(c)]);
    }
  return distance(lo, hi);
}

void repair_empty_clusters(const PointList& points, KMeansResult& result,
                           std::vector<std::size_t>& sizes) {
  const std::size_t k = result.centroids.size();
  for (std::size_t c = 0; c < k; ++c) {
    if (sizes[c] > 0) continue;
    // Split the largest cluster: its farthest member becomes this centroid.
    std::size_t largest = 0;
    for (std::size_t o = 1; o < k; ++o)
      if (sizes[o] > sizes[largest]) largest = o;
    if (sizes[largest] <= 1) continue;  // nothing left to split
    std::size_t far_point = points.size();
    double far_d2 = -1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (result.assignment[i] != largest) continue;
      const double d2 = squared_distance(points[i], result.centroids[largest]);
      if (d2 > far_d2) {
        far_d2 = d2;
        far_point = i;
      }
    }
    result.centroids[c] = points[far_point];
    result.assignment[far_point] = c;
    --sizes[largest];
    ++sizes[c];
  }
}

}  // namespace

KMeansResult kmeans(const PointList& points, std::size_t k,
                    std::uint64_t seed) {
  if (k == 0 || points.empty())
    throw std::invalid_argument("kmeans: empty input or k = 0");
  if (k > points.size())
    throw std::invalid_argument("kmeans: k exceeds point count");

  std::mt19937_64 rng(seed);
  KMeansResult result;
  result.centroids = seed_plus_plus(points, k, rng);
  result.assignment.assign(points.size(), 0);

  const double scale = std::max(bbox_diagonal(points),
                                std::numeric_limits<double>::min());
  std::vector<std::size_t> sizes(k, 0);
  PointList sums(k);

  for (int sweep = 0; sweep < 100; ++sweep) {
    std::fill(sizes.begin(), sizes.end(), 0);
    std::fill(sums.begin(), sums.end(), Point{0.0, 0.0, 0.0});
    for (std::size_t i = 0; i < points.size(); ++i) {
      const std::size_t c = nearest_centroid(points[i], result.centroids);
      result.assignment[i] = c;
      ++sizes[c];
      sums[c] = sums[c] + points[i];
    }
    repair_empty_clusters(points, result, sizes);
    // Recompute sums if repairs changed assignments.
    std::fill(sums.begin(), sums.end(), Point{0.0, 0.0, 0.0});
    for (std::size_t i = 0; i < points.size(); ++i)
      sums[result.assignment[i]] = sums[result.assignment[i]] + points[i];

    double max_shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] == 0) continue;
      const Point next = (1.0 / static_cast<double>(sizes[c])) * sums[c];
      max_shift = std::max(max_shift, distance(next, result.centroids[c]));
      result.centroids[c] = next;
    }
    if (max_shift / scale <= 1e-6) break;
  }

  // Final assignment consistent with the returned centroids.
  std::fill(sizes.begin(), sizes.end(), 0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    result.assignment[i] = nearest_centroid(points[i], result.centroids);
    ++sizes[result.assignment[i]];
  }
  repair_empty_clusters(points, result, sizes);
  return result;
}

}  // namespace rsot
