#include "lodestar/frame.hpp"

#include <cmath>
#include <string>

#include "lodestar/common.hpp"

namespace lodestar {

void validate_frame(const RadarFrame& frame) {
  if (frame.width <= 0 || frame.height <= 0)
    throw data_error("frame " + std::to_string(frame.frame_id) + ": empty image");
  if (frame.width != frame.height)
    throw data_error("frame " + std::to_string(frame.frame_id) + ": image not square (" +
                     std::to_string(frame.width) + "x" + std::to_string(frame.height) + ")");
  if (frame.image.size() != static_cast<std::size_t>(frame.width) * frame.height)
    throw data_error("frame " + std::to_string(frame.frame_id) + ": buffer size mismatch");
  if (!(frame.resolution > 0.0))
    throw data_error("frame " + std::to_string(frame.frame_id) + ": non-positive resolution");
  const double expected = frame.resolution * std::floor(frame.width / 2.0);
  if (std::abs(frame.r_max - expected) > frame.resolution)
    throw data_error("frame " + std::to_string(frame.frame_id) + ": r_max " +
                     std::to_string(frame.r_max) + " inconsistent with resolution*floor(w/2)=" +
                     std::to_string(expected));
  for (float v : frame.image) {
    if (std::isnan(v) || v < 0.0f || v > 1.0f)
      throw data_error("frame " + std::to_string(frame.frame_id) +
                       ": intensity outside [0,1] or NaN");
  }
}

PointCloud2D image_to_cloud(const RadarFrame& frame, double threshold, int bins) {
  if (threshold < 0.0 || threshold > 1.0) throw data_error("threshold outside [0,1]");
  PointCloud2D cloud;
  cloud.bins = bins;
  for (int row = 0; row < frame.height; ++row) {
    for (int col = 0; col < frame.width; ++col) {
      const float v = frame.at(row, col);
      if (v >= threshold) {
        Point2 p;
        pixel_to_point(frame, row, col, p.x, p.y);
        p.intensity = v;
        p.azimuth_bin = azimuth_bin_of(p.x, p.y, bins);
        cloud.points.push_back(p);
      }
    }
  }
  return cloud;
}

}  // namespace lodestar
