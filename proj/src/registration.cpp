#include "lodestar/registration.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <unordered_map>

#include "lodestar/common.hpp"

namespace lodestar {

namespace {

/// Uniform hash grid over 2-D points for radius / nearest-neighbor queries.
class PointGrid {
 public:
  PointGrid(const std::vector<double>& xs, const std::vector<double>& ys, double cell)
      : xs_(xs), ys_(ys), cell_(cell) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      cells_[key(xs[i], ys[i])].push_back(static_cast<int>(i));
    }
  }

  template <typename Fn>
  void for_neighbors(double x, double y, Fn&& fn) const {
    const long cx = coord(x), cy = coord(y);
    for (long gx = cx - 1; gx <= cx + 1; ++gx) {
      for (long gy = cy - 1; gy <= cy + 1; ++gy) {
        const auto it = cells_.find((gx << 32) ^ (gy & 0xffffffffl));
        if (it == cells_.end()) continue;
        for (int idx : it->second) fn(idx);
      }
    }
  }

 private:
  long coord(double v) const { return static_cast<long>(std::floor(v / cell_)); }
  long key(double x, double y) const { return (coord(x) << 32) ^ (coord(y) & 0xffffffffl); }

  const std::vector<double>& xs_;
  const std::vector<double>& ys_;
  double cell_;
  std::unordered_map<long, std::vector<int>> cells_;
};

}  // namespace

std::vector<SurfaceFeature> build_surfaces(const FeatureCloud& cloud, double radius,
                                           int min_neighbors) {
  if (!(radius > 0.0)) throw data_error("build_surfaces: radius must be > 0");
  if (min_neighbors < 2) throw data_error("build_surfaces: min_neighbors must be >= 2");

  const auto& pts = cloud.cloud.points;
  const std::size_t n = pts.size();
  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = pts[i].x;
    ys[i] = pts[i].y;
  }
  PointGrid grid(xs, ys, radius);
  const double r2 = radius * radius;

  std::vector<SurfaceFeature> out;
  std::vector<int> hood;
  for (std::size_t i = 0; i < n; ++i) {
    hood.clear();
    grid.for_neighbors(xs[i], ys[i], [&](int j) {
      const double dx = xs[j] - xs[i], dy = ys[j] - ys[i];
      if (dx * dx + dy * dy <= r2) hood.push_back(j);
    });
    const int others = static_cast<int>(hood.size()) - 1;
    if (others < min_neighbors) continue;

    double mx = 0.0, my = 0.0;
    for (int j : hood) {
      mx += xs[j];
      my += ys[j];
    }
    mx /= hood.size();
    my /= hood.size();

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int j : hood) {
      const double dx = xs[j] - mx, dy = ys[j] - my;
      sxx += dx * dx;
      sxy += dx * dy;
      syy += dy * dy;
    }
    sxx /= hood.size();
    sxy /= hood.size();
    syy /= hood.size();

    // Eigen decomposition of [[sxx, sxy], [sxy, syy]].
    const double tr = sxx + syy;
    const double disc = std::sqrt(std::max(0.0, (sxx - syy) * (sxx - syy) + 4.0 * sxy * sxy));
    const double l_max = 0.5 * (tr + disc);
    const double l_min = std::max(0.0, 0.5 * (tr - disc));

    // Minor eigenvector; of the two algebraic forms keep the one with the
    // larger norm (better conditioned).
    double ex = l_min - syy, ey = sxy;
    const double ax = sxy, ay = l_min - sxx;
    if (ax * ax + ay * ay > ex * ex + ey * ey) {
      ex = ax;
      ey = ay;
    }
    double norm = std::hypot(ex, ey);
    if (norm == 0.0) {  // isotropic neighborhood; any direction works
      ex = 1.0;
      ey = 0.0;
      norm = 1.0;
    }
    ex /= norm;
    ey /= norm;
    // Point toward the sensor at the body origin; exact ties keep the
    // computed direction.
    if (ex * -mx + ey * -my < 0.0) {
      ex = -ex;
      ey = -ey;
    }

    SurfaceFeature f;
    f.px = mx;
    f.py = my;
    f.nx = ex;
    f.ny = ey;
    f.planarity = l_max > 0.0 ? 1.0 - l_min / l_max : 0.0;
    f.neighbor_count = others;
    out.push_back(f);
  }
  return out;
}

double residual(const SurfaceFeature& a, const SurfaceFeature& b, const Pose2& T) {
  double tx, ty;
  T.apply(a.px, a.py, tx, ty);
  const double dx = b.px - tx, dy = b.py - ty;
  return dx * dx + dy * dy;
}

double similarity_weight(const SurfaceFeature& a, const SurfaceFeature& b) {
  const double dot = a.nx * b.nx + a.ny * b.ny;
  return std::max(0.0, dot) * std::min(a.planarity, b.planarity);
}

double objective(const std::vector<SurfaceFeature>& srcs, const std::vector<SurfaceFeature>& dsts,
                 const std::vector<std::pair<int, int>>& correspondences, const Pose2& T) {
  double sum = 0.0;
  for (const auto& [ia, ib] : correspondences) {
    const double eps2 = residual(srcs[ia], dsts[ib], T);
    sum += similarity_weight(srcs[ia], dsts[ib]) * std::log1p(eps2);
  }
  return sum;
}

std::array<double, 3> objective_gradient(const std::vector<SurfaceFeature>& srcs,
                                         const std::vector<SurfaceFeature>& dsts,
                                         const std::vector<std::pair<int, int>>& correspondences,
                                         const Pose2& T) {
  const double c = std::cos(T.theta), s = std::sin(T.theta);
  std::array<double, 3> g = {0.0, 0.0, 0.0};
  for (const auto& [ia, ib] : correspondences) {
    const SurfaceFeature& a = srcs[ia];
    const SurfaceFeature& b = dsts[ib];
    const double rx = c * a.px - s * a.py;
    const double ry = s * a.px + c * a.py;
    const double ex = b.px - (rx + T.x);
    const double ey = b.py - (ry + T.y);
    const double eps2 = ex * ex + ey * ey;
    const double alpha = similarity_weight(a, b);
    const double w = alpha / (1.0 + eps2);
    // de/dtheta = -R'(theta) p_a = (ry, -rx)
    g[0] += w * 2.0 * -ex;
    g[1] += w * 2.0 * -ey;
    g[2] += w * 2.0 * (ex * ry - ey * rx);
  }
  return g;
}

namespace {

struct Association {
  std::vector<std::pair<int, int>> pairs;
  std::vector<double> alpha;
};

Association associate(const std::vector<SurfaceFeature>& src,
                      const std::vector<SurfaceFeature>& dst, const PointGrid& dst_grid,
                      const Pose2& T, double gate) {
  Association assoc;
  const double gate2 = gate * gate;
  for (std::size_t i = 0; i < src.size(); ++i) {
    double tx, ty;
    T.apply(src[i].px, src[i].py, tx, ty);
    double best_d2 = std::numeric_limits<double>::infinity();
    int best = -1;
    dst_grid.for_neighbors(tx, ty, [&](int j) {
      const double dx = dst[j].px - tx, dy = dst[j].py - ty;
      const double d2 = dx * dx + dy * dy;
      if (d2 < best_d2 || (d2 == best_d2 && j < best)) {
        best_d2 = d2;
        best = j;
      }
    });
    if (best >= 0 && best_d2 <= gate2) {
      assoc.pairs.emplace_back(static_cast<int>(i), best);
      assoc.alpha.push_back(similarity_weight(src[i], dst[best]));
    }
  }
  return assoc;
}

double assoc_objective(const std::vector<SurfaceFeature>& src,
                       const std::vector<SurfaceFeature>& dst, const Association& assoc,
                       const Pose2& T) {
  double sum = 0.0;
  for (std::size_t k = 0; k < assoc.pairs.size(); ++k) {
    sum += assoc.alpha[k] * std::log1p(residual(src[assoc.pairs[k].first],
                                                dst[assoc.pairs[k].second], T));
  }
  return sum;
}

/// Solve the 3x3 SPD system A x = b by Cholesky. Returns false if A is not
/// positive definite.
bool solve3(const std::array<std::array<double, 3>, 3>& A, const std::array<double, 3>& b,
            std::array<double, 3>& x) {
  std::array<std::array<double, 3>, 3> L{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j <= i; ++j) {
      double sum = A[i][j];
      for (int k = 0; k < j; ++k) sum -= L[i][k] * L[j][k];
      if (i == j) {
        if (sum <= 0.0) return false;
        L[i][i] = std::sqrt(sum);
      } else {
        L[i][j] = sum / L[j][j];
      }
    }
  }
  std::array<double, 3> y{};
  for (int i = 0; i < 3; ++i) {
    double sum = b[i];
    for (int k = 0; k < i; ++k) sum -= L[i][k] * y[k];
    y[i] = sum / L[i][i];
  }
  for (int i = 2; i >= 0; --i) {
    double sum = y[i];
    for (int k = i + 1; k < 3; ++k) sum -= L[k][i] * x[k];
    x[i] = sum / L[i][i];
  }
  return true;
}

}  // namespace

RegistrationResult register_clouds(const std::vector<SurfaceFeature>& src,
                                   const std::vector<SurfaceFeature>& dst, const Pose2& T0,
                                   const RegistrationParams& params) {
  RegistrationResult result;
  result.pose = T0;
  if (src.empty() || dst.empty()) {
    result.status = RegistrationStatus::empty_input;
    return result;
  }

  std::vector<double> dxs(dst.size()), dys(dst.size());
  for (std::size_t j = 0; j < dst.size(); ++j) {
    dxs[j] = dst[j].px;
    dys[j] = dst[j].py;
  }
  PointGrid dst_grid(dxs, dys, params.max_correspondence_distance);

  Pose2 T = T0;
  Association assoc = associate(src, dst, dst_grid, T, params.max_correspondence_distance);
  if (assoc.pairs.empty()) {
    result.status = RegistrationStatus::no_correspondences;
    return result;
  }
  double cost = assoc_objective(src, dst, assoc, T);

  double lambda = params.lambda_init;
  constexpr double kLambdaMax = 1e12;
  bool converged = false;
  int iter = 0;
  while (iter < params.max_iterations) {
    ++iter;
    // IRLS Gauss-Newton normal equations at the current pose.
    const double c = std::cos(T.theta), s = std::sin(T.theta);
    std::array<std::array<double, 3>, 3> H{};
    std::array<double, 3> g{};
    for (std::size_t k = 0; k < assoc.pairs.size(); ++k) {
      const SurfaceFeature& a = src[assoc.pairs[k].first];
      const SurfaceFeature& b = dst[assoc.pairs[k].second];
      const double rx = c * a.px - s * a.py;
      const double ry = s * a.px + c * a.py;
      const double ex = b.px - (rx + T.x);
      const double ey = b.py - (ry + T.y);
      const double eps2 = ex * ex + ey * ey;
      const double w = assoc.alpha[k] / (1.0 + eps2);
      // J = [de/dx de/dy de/dtheta], de/dx = (-1,0), de/dy = (0,-1),
      // de/dtheta = (ry, -rx).
      const double jt0x = -1.0, jt0y = 0.0;
      const double jt1x = 0.0, jt1y = -1.0;
      const double jt2x = ry, jt2y = -rx;
      H[0][0] += w * (jt0x * jt0x + jt0y * jt0y);
      H[0][1] += w * (jt0x * jt1x + jt0y * jt1y);
      H[0][2] += w * (jt0x * jt2x + jt0y * jt2y);
      H[1][1] += w * (jt1x * jt1x + jt1y * jt1y);
      H[1][2] += w * (jt1x * jt2x + jt1y * jt2y);
      H[2][2] += w * (jt2x * jt2x + jt2y * jt2y);
      g[0] += w * (jt0x * ex + jt0y * ey);
      g[1] += w * (jt1x * ex + jt1y * ey);
      g[2] += w * (jt2x * ex + jt2y * ey);
    }
    H[1][0] = H[0][1];
    H[2][0] = H[0][2];
    H[2][1] = H[1][2];

    std::array<std::array<double, 3>, 3> Hd = H;
    for (int d = 0; d < 3; ++d) Hd[d][d] += lambda;
    std::array<double, 3> step{};
    std::array<double, 3> rhs = {-g[0], -g[1], -g[2]};
    if (!solve3(Hd, rhs, step)) {
      lambda = std::min(lambda * 10.0, kLambdaMax);
      if (lambda >= kLambdaMax) break;
      continue;
    }

    Pose2 T_new;
    T_new.x = T.x + step[0];
    T_new.y = T.y + step[1];
    T_new.theta = wrap_angle(T.theta + step[2]);
    const double cost_new = assoc_objective(src, dst, assoc, T_new);

    if (params.verbose) {
      std::fprintf(stderr,
                   "reg it=%d lambda=%.3g cost=%.6g -> %.6g step=(%.4g, %.4g, %.4g) pairs=%zu\n",
                   iter, lambda, cost, cost_new, step[0], step[1], step[2], assoc.pairs.size());
    }

    if (cost_new <= cost) {
      if (params.collect_diagnostics) result.accepted_costs.emplace_back(cost, cost_new);
      T = T_new;
      cost = cost_new;
      lambda = std::max(lambda / 10.0, 1e-12);
      const double step_norm =
          std::sqrt(step[0] * step[0] + step[1] * step[1] + step[2] * step[2]);
      assoc = associate(src, dst, dst_grid, T, params.max_correspondence_distance);
      if (assoc.pairs.empty()) break;  // moved out of overlap; keep the pose
      cost = assoc_objective(src, dst, assoc, T);
      if (step_norm < params.tol) {
        converged = true;
        break;
      }
    } else {
      lambda = std::min(lambda * 10.0, kLambdaMax);
      if (lambda >= kLambdaMax) break;
    }
  }

  result.pose = T;
  result.iterations = iter;
  result.converged = converged;
  result.final_cost = cost;
  result.inlier_fraction = static_cast<double>(assoc.pairs.size()) / src.size();
  if (params.collect_diagnostics) {
    for (std::size_t k = 0; k < assoc.pairs.size(); ++k) {
      const double eps2 = residual(src[assoc.pairs[k].first], dst[assoc.pairs[k].second], T);
      result.final_pairs.push_back({assoc.pairs[k].first, assoc.pairs[k].second,
                                    assoc.alpha[k] / (1.0 + eps2), eps2});
    }
  }
  return result;
}

}  // namespace lodestar
