#pragma once

#include <cstddef>

// Per-backend entry points. Each backend provides the full table; the
// dispatcher in kernels.cpp selects one at startup.

namespace lodestar::kernels::scalar_impl {
double dot(const double* a, const double* b, std::size_t n);
void circular_correlate(const double* a, const double* b, std::size_t n, double* out);
double bilinear_ray_sum(const float* img, int width, int height, double row0, double col0,
                        double drow, double dcol, int n);
void local_contrast(const float* img, int width, int height, float* out);
void box_mean3(const float* img, int width, int height, float* out);
void abs_diff(const float* a, const float* b, std::size_t n, float* out);
}  // namespace lodestar::kernels::scalar_impl

#if defined(LODESTAR_HAVE_AVX2)
namespace lodestar::kernels::avx2_impl {
double dot(const double* a, const double* b, std::size_t n);
void circular_correlate(const double* a, const double* b, std::size_t n, double* out);
double bilinear_ray_sum(const float* img, int width, int height, double row0, double col0,
                        double drow, double dcol, int n);
void local_contrast(const float* img, int width, int height, float* out);
void box_mean3(const float* img, int width, int height, float* out);
void abs_diff(const float* a, const float* b, std::size_t n, float* out);
}  // namespace lodestar::kernels::avx2_impl
#endif
