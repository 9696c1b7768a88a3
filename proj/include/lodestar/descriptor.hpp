#pragma once

#include <vector>

#include "lodestar/frame.hpp"

namespace lodestar {

/// Periodic 1-D radial-integration signature over azimuth bins. values[k] is
/// the line integral of image intensity along the ray at bin k's center
/// angle, from the image center out to r_max, in pixel-length units.
struct LodeStarDescriptor {
  std::vector<double> values;

  int bins() const { return static_cast<int>(values.size()); }
  double bin_width() const { return kTwoPi / bins(); }
};

/// Dense rotation estimate between two frames.
struct RotationEstimate {
  double theta_L = 0.0;          // radians in (-pi, pi]; vehicle yaw increment
  double correlation_peak = 0.0; // value at the best shift
  double peak_ratio = 1.0;       // peak / second-highest non-adjacent peak
};

/// Radial-wise integration of the frame at `bins` azimuth angles. Samples
/// are taken every pixel along each ray with bilinear interpolation and
/// never extend past r_max (image corners are not sampled).
LodeStarDescriptor compute_descriptor(const RadarFrame& frame, int bins);

/// out[s] = sum_k a[(k+s) mod A] * b[k]. Bin counts must match.
std::vector<double> circular_correlate(const LodeStarDescriptor& a, const LodeStarDescriptor& b);

/// Recover the rotation between the frames behind `prev` and `curr`.
/// Positive theta_L means the vehicle yawed by +theta_L between the frames
/// (descriptor content moved forward by theta_L / bin_width bins).
/// `refine` enables parabolic sub-bin interpolation around the peak.
/// If either descriptor is all-zero the estimate degenerates to
/// theta_L = 0 with peak_ratio = 1.
RotationEstimate estimate_rotation(const LodeStarDescriptor& prev, const LodeStarDescriptor& curr,
                                   bool refine = true);

}  // namespace lodestar
