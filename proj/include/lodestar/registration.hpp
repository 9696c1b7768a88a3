#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "lodestar/features.hpp"
#include "lodestar/geometry.hpp"

namespace lodestar {

/// Local surface summary: neighborhood centroid, unit normal (minor
/// eigenvector of the neighborhood covariance, pointed toward the sensor
/// origin), and a planarity score 1 - lambda_min/lambda_max.
struct SurfaceFeature {
  double px = 0.0, py = 0.0;    // centroid (meters)
  double nx = 0.0, ny = 0.0;    // unit normal
  double planarity = 0.0;       // [0, 1]
  int neighbor_count = 0;       // points within radius, excluding the anchor
};

enum class RegistrationStatus { ok, empty_input, no_correspondences };

struct RegistrationResult {
  Pose2 pose;                  // maps src coordinates into dst coordinates
  double final_cost = 0.0;
  int iterations = 0;
  double inlier_fraction = 0.0;  // matched src points / src size, at the final pose
  bool converged = false;
  RegistrationStatus status = RegistrationStatus::ok;

  // Diagnostics (filled when the corresponding params flags are set).
  std::vector<std::pair<double, double>> accepted_costs;  // (before, after) per accepted step
  struct PairWeight {
    int src = 0;
    int dst = 0;
    double weight = 0.0;  // IRLS weight alpha / (1 + eps^2)
    double eps2 = 0.0;
  };
  std::vector<PairWeight> final_pairs;
};

struct RegistrationParams {
  double max_correspondence_distance = 6.0;  // meters
  int max_iterations = 50;
  double tol = 1e-6;          // on the parameter update norm
  double lambda_init = 1e-3;  // Levenberg damping
  bool collect_diagnostics = false;
  bool verbose = false;
};

/// Build surface features from a sparse cloud. A point contributes one
/// feature when at least min_neighbors other points lie within radius; the
/// neighborhood (anchor included) supplies the centroid and covariance.
std::vector<SurfaceFeature> build_surfaces(const FeatureCloud& cloud, double radius,
                                           int min_neighbors);

/// Squared Euclidean point-to-point error ||p_b - (R p_a + tau)||^2.
double residual(const SurfaceFeature& a, const SurfaceFeature& b, const Pose2& T);

/// alpha = max(0, eta_a . eta_b) * min(planarity_a, planarity_b).
double similarity_weight(const SurfaceFeature& a, const SurfaceFeature& b);

/// Cauchy objective sum alpha * log(1 + eps^2) over the given index pairs.
double objective(const std::vector<SurfaceFeature>& srcs, const std::vector<SurfaceFeature>& dsts,
                 const std::vector<std::pair<int, int>>& correspondences, const Pose2& T);

/// Analytic gradient of `objective` with respect to (x, y, theta).
std::array<double, 3> objective_gradient(const std::vector<SurfaceFeature>& srcs,
                                         const std::vector<SurfaceFeature>& dsts,
                                         const std::vector<std::pair<int, int>>& correspondences,
                                         const Pose2& T);

/// Robust registration: nearest-neighbor association gated at
/// max_correspondence_distance, then damped Gauss-Newton steps on the
/// Cauchy-reweighted objective, re-associating after each accepted step.
/// Deterministic: nearest-neighbor ties resolve to the lowest index.
RegistrationResult register_clouds(const std::vector<SurfaceFeature>& src,
                                   const std::vector<SurfaceFeature>& dst, const Pose2& T0,
                                   const RegistrationParams& params);

}  // namespace lodestar
