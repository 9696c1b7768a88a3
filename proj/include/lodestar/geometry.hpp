#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace lodestar {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Wrap an angle to (-pi, pi].
inline double wrap_angle(double theta) {
  double r = std::remainder(theta, kTwoPi);  // [-pi, pi]
  if (r == -kPi) r = kPi;
  return r;
}

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

/// Planar rigid transform. theta is kept in (-pi, pi]; the rotation acts on
/// (x, y) column vectors with the usual matrix
///   [cos -sin; sin cos].
/// Axis convention used throughout: +x is image "up" (rows decreasing,
/// north), +y is image "right" (columns increasing, east).
struct Pose2 {
  double theta = 0.0;
  double x = 0.0;
  double y = 0.0;

  static Pose2 identity() { return {}; }

  /// Apply to a point: R(theta) * p + t.
  void apply(double px, double py, double& ox, double& oy) const {
    const double c = std::cos(theta), s = std::sin(theta);
    ox = c * px - s * py + x;
    oy = s * px + c * py + y;
  }
};

inline Pose2 compose(const Pose2& a, const Pose2& b) {
  Pose2 out;
  out.theta = wrap_angle(a.theta + b.theta);
  a.apply(b.x, b.y, out.x, out.y);
  return out;
}

inline Pose2 inverse(const Pose2& p) {
  const double c = std::cos(p.theta), s = std::sin(p.theta);
  Pose2 out;
  out.theta = wrap_angle(-p.theta);
  out.x = -(c * p.x + s * p.y);
  out.y = -(-s * p.x + c * p.y);
  return out;
}

struct TimedPose {
  double timestamp = 0.0;
  Pose2 pose;
};

/// Timestamped pose sequence; timestamps strictly increasing.
struct Trajectory {
  std::vector<TimedPose> poses;

  bool empty() const { return poses.empty(); }
  std::size_t size() const { return poses.size(); }
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  float intensity = 0.0f;
  std::int32_t azimuth_bin = 0;
};

/// 2-D points in the body frame of a radar image, with the azimuth
/// discretization (bins) they were binned against.
struct PointCloud2D {
  std::vector<Point2> points;
  int bins = 360;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

/// Azimuth of a body-frame point, in [0, 2pi). Matches the radial sampling
/// direction d(theta) = (sin theta, cos theta): theta = atan2(x, y).
inline double point_azimuth(double x, double y) {
  double a = std::atan2(x, y);
  if (a < 0.0) a += kTwoPi;
  return a;
}

/// Bin whose center angle is nearest to the point azimuth.
inline int azimuth_bin_of(double x, double y, int bins) {
  const double w = kTwoPi / bins;
  const int k = static_cast<int>(std::lround(point_azimuth(x, y) / w));
  return k % bins;
}

/// Rotate by pose.theta then translate by (pose.x, pose.y). Intensities are
/// preserved; azimuth bins are recomputed from the new coordinates.
PointCloud2D transform_cloud(const PointCloud2D& cloud, const Pose2& pose);

}  // namespace lodestar
