#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lodestar/descriptor.hpp"
#include "lodestar/features.hpp"
#include "lodestar/frame.hpp"
#include "lodestar/registration.hpp"

namespace lodestar {

enum class OverlapMode { off, image_diff, timestamps };
enum class FeatureSelector { k_nearest, k_strongest };

/// Everything the odometry pipeline needs, serializable to/from the
/// key-value config format (see README).
struct PipelineConfig {
  int bins = 360;                      // descriptor azimuth bins
  int k = 10;                          // features per bin
  FeatureSelector selector = FeatureSelector::k_nearest;
  FilterKind filter_kind = FilterKind::high_pass;
  double grad_threshold = 0.15;        // contour contrast threshold
  double change_threshold = 0.02;      // overlap mean-intensity-change gate
  OverlapMode overlap_mode = OverlapMode::off;
  double intensity_threshold = 0.25;   // image-to-cloud threshold
  double dense_gate = 1.2;             // min peak_ratio to trust theta_L (inf = never)
  bool subbin_refine = true;
  double gate_factor = 3.0;            // correspondence gate, in range resolutions
  double surface_radius = 8.0;         // meters
  int min_neighbors = 3;
  int max_iterations = 50;
  double tol = 1e-6;
  double lambda_init = 1e-3;
};

PipelineConfig parse_config(std::istream& in, const std::string& origin = "<config>");
PipelineConfig load_config(const std::string& path);
void write_config(std::ostream& out, const PipelineConfig& config);

/// One odometry step between consecutive frames.
struct OdometryStep {
  std::int64_t frame_a = 0;
  std::int64_t frame_b = 0;
  double theta_L = 0.0;  // dense rotation (radians)
  double theta_P = 0.0;  // sparse residual rotation (radians)
  Pose2 pose_delta;      // motion increment; pose_delta.theta == wrap(theta_L + theta_P)
  bool degraded = false; // sparse stage failed; pose_delta is pure rotation
  // Diagnostics.
  double peak_ratio = 0.0;
  bool dense_gated = false;  // theta_L zeroed by the peak-ratio gate
  double stale_fraction = 0.0;
  double final_cost = 0.0;
  int iterations = 0;
  double inlier_fraction = 0.0;
  bool converged = false;
  std::size_t src_features = 0;
  std::size_t dst_features = 0;
};

/// Run the semi-direct step for one frame pair: dense rotation from the
/// descriptors, feature extraction (with optional overlap dropout on the
/// current frame), rotation-corrected sparse registration, and the composed
/// motion increment.
OdometryStep process_pair(const RadarFrame& prev, const RadarFrame& curr,
                          const PipelineConfig& config);

struct OdometryRun {
  Trajectory trajectory;  // one pose per frame, starting at identity
  std::vector<OdometryStep> steps;
};

/// Fold process_pair over the sequence. Deterministic given frames+config.
OdometryRun run_sequence(const std::vector<RadarFrame>& frames, const PipelineConfig& config);

}  // namespace lodestar
