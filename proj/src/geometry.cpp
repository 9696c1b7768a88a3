#include "lodestar/geometry.hpp"

namespace lodestar {

PointCloud2D transform_cloud(const PointCloud2D& cloud, const Pose2& pose) {
  PointCloud2D out;
  out.bins = cloud.bins;
  out.points.reserve(cloud.points.size());
  for (const Point2& p : cloud.points) {
    Point2 q;
    pose.apply(p.x, p.y, q.x, q.y);
    q.intensity = p.intensity;
    q.azimuth_bin = azimuth_bin_of(q.x, q.y, cloud.bins);
    out.points.push_back(q);
  }
  return out;
}

}  // namespace lodestar
