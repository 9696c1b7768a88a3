#pragma once

#include <cstdint>
#include <vector>

#include "lodestar/geometry.hpp"

namespace lodestar {

/// One azimuth sector of a scan with the time it was actually swept.
/// Angles in radians, [0, 2pi), body frame.
struct SectorStamp {
  double az_start = 0.0;
  double az_end = 0.0;
  double scan_time = 0.0;
};

/// One Cartesian radar image. Intensities are stored row-major, normalized
/// to [0, 1] (8-bit sources are scaled by 1/255). The image center maps to
/// the body-frame origin; +x is up (rows decreasing), +y is right (columns
/// increasing).
struct RadarFrame {
  std::vector<float> image;  // row-major, width * height
  int width = 0;
  int height = 0;
  double resolution = 1.0;  // meters per pixel
  double r_max = 0.0;       // meters
  double timestamp = 0.0;   // seconds
  std::int64_t frame_id = 0;
  std::vector<SectorStamp> sectors;  // optional per-sector scan times

  float at(int row, int col) const { return image[static_cast<std::size_t>(row) * width + col]; }
  float& at(int row, int col) { return image[static_cast<std::size_t>(row) * width + col]; }

  /// Center coordinate in pixel units (exact pixel for odd sizes).
  double center() const { return (width - 1) / 2.0; }
};

/// Throws data_error if the frame violates its invariants (square image,
/// r_max consistent with resolution, intensities in [0,1], no NaN).
void validate_frame(const RadarFrame& frame);

/// Map pixel indices to body-frame meters (pixel center).
inline void pixel_to_point(const RadarFrame& f, int row, int col, double& x, double& y) {
  const double c = f.center();
  x = (c - row) * f.resolution;
  y = (col - c) * f.resolution;
}

/// One point per pixel with intensity >= threshold; coordinates are pixel
/// centers in meters with the image center at the origin. Empty output is
/// legal. `bins` sets the azimuth discretization recorded on the points.
PointCloud2D image_to_cloud(const RadarFrame& frame, double threshold, int bins = 360);

}  // namespace lodestar
