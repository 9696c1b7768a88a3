#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lodestar/frame.hpp"
#include "lodestar/geometry.hpp"

namespace lodestar::synth {

/// Closed 2-D polygon in world meters with a radar cross-section level.
struct CoastPolygon {
  std::vector<std::pair<double, double>> vertices;  // (x, y), closed implicitly
  double rcs = 1.0;
};

/// Static world description plus the stochastic image model.
struct Scene {
  std::vector<CoastPolygon> coast_polygons;
  std::vector<double> rcs_levels = {0.0, 0.5, 1.0};  // sorted ascending, contains 0
  double false_alarm_rate = 0.0;  // probability per pixel
  double speckle_sigma = 0.0;     // additive intensity std-dev
  std::uint64_t seed = 0;
};

enum class ScanMode { full_rotation, partial_sector };

/// Timing of image publication relative to the antenna revolution.
struct ScanSchedule {
  double frame_period = 1.0;  // seconds between published images
  double sweep_period = 1.0;  // seconds per full antenna revolution
  ScanMode mode = ScanMode::full_rotation;
  int rays = 360;  // angular ray density (match the descriptor bin count)
};

struct FrameSpec {
  int width = 401;          // pixels, square
  double resolution = 2.0;  // meters per pixel
};

/// Validate scene invariants (levels sorted, contain 0; polygons >= 3
/// vertices and non-self-intersecting). Throws data_error.
void validate_scene(const Scene& scene);

/// Parse / serialize the plain-text scene description (see README for the
/// grammar). Throws data_error with line numbers on malformed input.
Scene parse_scene(std::istream& in, const std::string& origin = "<scene>");
Scene load_scene(const std::string& path);

/// Render one frame by ray casting from `pose` at time `t`. Full-rotation
/// mode renders every ray at `pose`; use a SequenceRenderer for
/// partial-sector sequences. Throws data_error if the pose is outside the
/// scene's bounding box (scenes without polygons are unbounded).
RadarFrame render_frame(const Scene& scene, const Pose2& pose, const FrameSpec& spec,
                        const ScanSchedule& schedule, double t);

/// Renders a whole sequence, one frame per trajectory pose. Deterministic
/// given the scene seed. In partial-sector mode each frame re-renders only
/// the sectors swept since the previous publication (at poses interpolated
/// to the sector sweep times) on top of the previous frame's buffer, and
/// frames carry per-sector scan-time stamps.
std::vector<RadarFrame> generate_sequence(const Scene& scene, const Trajectory& trajectory,
                                          const FrameSpec& spec, const ScanSchedule& schedule);

/// Pose linearly interpolated between trajectory waypoints (shortest-arc on
/// theta); clamped at the ends.
Pose2 interpolate_pose(const Trajectory& trajectory, double t);

}  // namespace lodestar::synth
