#include "rsot/spatial_index.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>

namespace rsot {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

using BoostPoint = bg::model::point<double, 3, bg::cs::cartesian>;
using BoostBox = bg::model::box<BoostPoint>;
using Entry = std::pair<BoostPoint, std::size_t>;

namespace {

BoostPoint to_boost(const Point& p) { return BoostPoint(p[0], p[1], p[2]); }

}  // namespace

struct SpatialIndex::Impl {
  bgi::rtree<Entry, bgi::rstar<16>> tree;
  PointList points;
};

SpatialIndex::SpatialIndex(const PointList& points) {
  if (points.empty())
    throw std::invalid_argument("spatial index: empty point set");
  std::vector<Entry> entries;
  entries.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i)
    entries.emplace_back(to_boost(points[i]), i);
  impl_ = std::make_unique<Impl>();
  impl_->tree = bgi::rtree<Entry, bgi::rstar<16>>(entries);
  impl_->points = points;
  count_ = points.size();
}

SpatialIndex::~SpatialIndex() = default;
SpatialIndex::SpatialIndex(SpatialIndex&&) noexcept = default;
SpatialIndex& SpatialIndex::operator=(SpatialIndex&&) noexcept = default;

void SpatialIndex::ball_query(const Point& center, double radius,
                              std::vector<std::size_t>& out) const {
  out.clear();
  if (!(radius > 0.0)) return;
  const BoostBox box(
      BoostPoint(center[0] - radius, center[1] - radius, center[2] - radius),
      BoostPoint(center[0] + radius, center[1] + radius, center[2] + radius));
  const double r2 = radius * radius;
  for (auto it = impl_->tree.qbegin(bgi::intersects(box));
       it != impl_->tree.qend(); ++it) {
    const std::size_t j = it->second;
    if (squared_distance(center, impl_->points[j]) < r2) out.push_back(j);
  }
  std::sort(out.begin(), out.end());
}

std::vector<std::size_t> SpatialIndex::ball_query(const Point& center,
                                                  double radius) const {
  std::vector<std::size_t> out;
  ball_query(center, radius, out);
  return out;
}

std::size_t SpatialIndex::nearest(const Point& center) const {
  std::size_t best = impl_->points.size();
  double best_d2 = std::numeric_limits<double>::infinity();
  // Pull a few candidates so that exact ties resolve to the lowest index.
  for (auto it = impl_->tree.qbegin(bgi::nearest(to_boost(center), 4));
       it != impl_->tree.qend(); ++it) {
    const std::size_t j = it->second;
    const double d2 = squared_distance(center, impl_->points[j]);
    if (d2 < best_d2 || (d2 == best_d2 && j < best)) {
      best_d2 = d2;
      best = j;
    }
  }
  return best;
}

SpatialIndex build_index(const PointList& points) {
  return SpatialIndex(points);
}

std::vector<std::size_t> range_query(const SpatialIndex& index,
                                     const Point& center, double cutoff,
                                     CostKind kind) {
  if (cutoff < 0.0) throw std::invalid_argument("range query: negative cutoff");
  const auto radius = ball_radius(kind, cutoff);
  if (!radius)
    throw std::invalid_argument(
        "range query: cost kind has no ball-radius conversion");
  return index.ball_query(center, *radius);
}

double covering_cost(const SourceAtoms& atoms, const TargetMeasure& target,
                     CostKind kind) {
  if (atoms.size() == 0 || target.size() == 0)
    throw std::invalid_argument("covering cost: empty input");
  double c0 = 0.0;
  if (kind == CostKind::SqEuclidean) {
    const SpatialIndex index(target.points);
    for (const Point& x : atoms.points) {
      const std::size_t j = index.nearest(x);
      c0 = std::max(c0, cost(kind, x, target.points[j]));
    }
  } else {
    for (const Point& x : atoms.points) {
      double cmin = std::numeric_limits<double>::infinity();
      for (const Point& y : target.points)
        cmin = std::min(cmin, cost(kind, x, y));
      c0 = std::max(c0, cmin);
    }
  }
  return c0;
}

}  // namespace rsot
