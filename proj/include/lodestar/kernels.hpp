#pragma once

#include <cstddef>

namespace lodestar::kernels {

/// Kernel backends. `scalar` is the reference implementation; SIMD variants
/// must match it within the tolerances asserted by the equivalence tests.
enum class Backend { scalar, avx2 };

const char* backend_name(Backend b);

/// Backend currently in use. Resolved on first call: picks the widest
/// variant the CPU supports, unless the LODESTAR_KERNELS environment
/// variable ("scalar" or "avx2") overrides it.
Backend active_backend();

/// Force a backend. Returns false (and leaves the selection unchanged) if
/// the CPU does not support it. Not safe to call while kernels are running
/// on other threads.
bool set_backend(Backend b);

bool backend_supported(Backend b);

/// sum_i a[i] * b[i]
double dot(const double* a, const double* b, std::size_t n);

/// out[s] = sum_k a[(k+s) mod n] * b[k] for all s in [0, n).
void circular_correlate(const double* a, const double* b, std::size_t n, double* out);

/// Sum of bilinearly interpolated samples along a ray:
///   sum_{i=0}^{n-1} bilerp(img, row0 + i*drow, col0 + i*dcol).
/// All sample positions must lie inside [0, h-1] x [0, w-1].
double bilinear_ray_sum(const float* img, int width, int height, double row0, double col0,
                        double drow, double dcol, int n);

/// Per-pixel local contrast: max absolute one-sided difference against the
/// 4-neighborhood, borders clamped (edge pixels see themselves, diff 0).
void local_contrast(const float* img, int width, int height, float* out);

/// 3x3 box mean with replicated borders (always 9 taps).
void box_mean3(const float* img, int width, int height, float* out);

/// out[i] = |a[i] - b[i]|
void abs_diff(const float* a, const float* b, std::size_t n, float* out);

}  // namespace lodestar::kernels
