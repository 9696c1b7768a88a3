#include "lodestar/descriptor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lodestar/common.hpp"
#include "lodestar/kernels.hpp"

namespace lodestar {

LodeStarDescriptor compute_descriptor(const RadarFrame& frame, int bins) {
  if (bins < 8) throw data_error("descriptor bin count must be >= 8");
  LodeStarDescriptor d;
  d.values.resize(bins);
  const double c = frame.center();
  // Radial samples every pixel from the center out to r_max; |sin|,|cos| <= 1
  // keeps every sample inside the image.
  const int n_samples = static_cast<int>(std::floor((frame.width - 1) / 2.0)) + 1;
  const double w = kTwoPi / bins;
  for (int k = 0; k < bins; ++k) {
    const double theta = k * w;
    const double drow = -std::sin(theta);  // row = c - r sin(theta)
    const double dcol = std::cos(theta);   // col = c + r cos(theta)
    d.values[k] =
        kernels::bilinear_ray_sum(frame.image.data(), frame.width, frame.height, c, c, drow, dcol,
                                  n_samples);
  }
  return d;
}

std::vector<double> circular_correlate(const LodeStarDescriptor& a, const LodeStarDescriptor& b) {
  if (a.bins() != b.bins()) throw data_error("descriptor bin counts differ");
  std::vector<double> out(a.values.size());
  kernels::circular_correlate(a.values.data(), b.values.data(), a.values.size(), out.data());
  return out;
}

RotationEstimate estimate_rotation(const LodeStarDescriptor& prev, const LodeStarDescriptor& curr,
                                   bool refine) {
  if (prev.bins() != curr.bins()) throw data_error("descriptor bin counts differ");
  const int n = prev.bins();
  const double w = prev.bin_width();

  const auto zero = [](const LodeStarDescriptor& d) {
    for (double v : d.values)
      if (v != 0.0) return false;
    return true;
  };
  if (zero(prev) || zero(curr)) return {0.0, 0.0, 1.0};

  // Correlating (curr, prev) puts the peak at the shift the content moved
  // forward by, which is the vehicle yaw increment.
  std::vector<double> c = circular_correlate(curr, prev);

  int peak = 0;
  for (int s = 1; s < n; ++s)
    if (c[s] > c[peak]) peak = s;

  // Second-highest peak outside the immediate neighborhood of the best one.
  double second = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < n; ++s) {
    if (s == peak || (s + 1) % n == peak || (peak + 1) % n == s) continue;
    second = std::max(second, c[s]);
  }

  double shift = peak;
  if (refine) {
    const double cm = c[(peak + n - 1) % n];
    const double cp = c[(peak + 1) % n];
    const double denom = cm - 2.0 * c[peak] + cp;
    if (denom < 0.0) {
      double delta = 0.5 * (cm - cp) / denom;
      delta = std::clamp(delta, -0.5, 0.5);
      shift += delta;
    }
  }

  RotationEstimate est;
  est.theta_L = wrap_angle(shift * w);
  est.correlation_peak = c[peak];
  est.peak_ratio = second > 0.0 ? c[peak] / second
                                : std::numeric_limits<double>::infinity();
  if (est.peak_ratio < 1.0) est.peak_ratio = 1.0;
  return est;
}

}  // namespace lodestar
