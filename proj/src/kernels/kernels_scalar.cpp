#include <algorithm>
#include <cmath>

#include "kernels_internal.hpp"

// Reference kernels. Plain loops, no explicit vectorization; the SIMD
// backends are equivalence-tested against these.

namespace lodestar::kernels::scalar_impl {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void circular_correlate(const double* a, const double* b, std::size_t n, double* out) {
  // out[s] = sum_k a[(k+s) mod n] * b[k], split at the wrap point so the
  // inner loops stay contiguous.
  for (std::size_t s = 0; s < n; ++s) {
    out[s] = dot(a + s, b, n - s) + dot(a, b + (n - s), s);
  }
}

double bilinear_ray_sum(const float* img, int width, int height, double row0, double col0,
                        double drow, double dcol, int n) {
  double acc = 0.0;
  double row = row0, col = col0;
  for (int i = 0; i < n; ++i) {
    const int r0 = static_cast<int>(std::floor(row));
    const int c0 = static_cast<int>(std::floor(col));
    const double fr = row - r0;
    const double fc = col - c0;
    const int r1 = std::min(r0 + 1, height - 1);
    const int c1 = std::min(c0 + 1, width - 1);
    const double v00 = img[static_cast<std::size_t>(r0) * width + c0];
    const double v01 = img[static_cast<std::size_t>(r0) * width + c1];
    const double v10 = img[static_cast<std::size_t>(r1) * width + c0];
    const double v11 = img[static_cast<std::size_t>(r1) * width + c1];
    acc += (1.0 - fr) * ((1.0 - fc) * v00 + fc * v01) + fr * ((1.0 - fc) * v10 + fc * v11);
    row += drow;
    col += dcol;
  }
  return acc;
}

void local_contrast(const float* img, int width, int height, float* out) {
  for (int r = 0; r < height; ++r) {
    const int rm = std::max(r - 1, 0), rp = std::min(r + 1, height - 1);
    for (int c = 0; c < width; ++c) {
      const int cm = std::max(c - 1, 0), cp = std::min(c + 1, width - 1);
      const float v = img[static_cast<std::size_t>(r) * width + c];
      float m = std::abs(v - img[static_cast<std::size_t>(r) * width + cm]);
      m = std::max(m, std::abs(v - img[static_cast<std::size_t>(r) * width + cp]));
      m = std::max(m, std::abs(v - img[static_cast<std::size_t>(rm) * width + c]));
      m = std::max(m, std::abs(v - img[static_cast<std::size_t>(rp) * width + c]));
      out[static_cast<std::size_t>(r) * width + c] = m;
    }
  }
}

void box_mean3(const float* img, int width, int height, float* out) {
  constexpr float kInv9 = 1.0f / 9.0f;
  for (int r = 0; r < height; ++r) {
    const int rm = std::max(r - 1, 0), rp = std::min(r + 1, height - 1);
    for (int c = 0; c < width; ++c) {
      const int cm = std::max(c - 1, 0), cp = std::min(c + 1, width - 1);
      float sum = 0.0f;
      for (int rr : {rm, r, rp}) {
        const float* row = img + static_cast<std::size_t>(rr) * width;
        sum += row[cm] + row[c] + row[cp];
      }
      out[static_cast<std::size_t>(r) * width + c] = sum * kInv9;
    }
  }
}

void abs_diff(const float* a, const float* b, std::size_t n, float* out) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::abs(a[i] - b[i]);
}

}  // namespace lodestar::kernels::scalar_impl
