#if defined(LODESTAR_HAVE_AVX2)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "kernels_internal.hpp"

namespace lodestar::kernels::avx2_impl {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

inline __m256 abs_ps(__m256 v) {
  const __m256 mask = _mm256_castsi256_ps(_mm256_set1_epi32(0x7fffffff));
  return _mm256_and_ps(v, mask);
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void circular_correlate(const double* a, const double* b, std::size_t n, double* out) {
  for (std::size_t s = 0; s < n; ++s) {
    out[s] = dot(a + s, b, n - s) + dot(a, b + (n - s), s);
  }
}

double bilinear_ray_sum(const float* img, int width, int height, double row0, double col0,
                        double drow, double dcol, int n) {
  const __m256d iota = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
  __m256d row = _mm256_fmadd_pd(iota, _mm256_set1_pd(drow), _mm256_set1_pd(row0));
  __m256d col = _mm256_fmadd_pd(iota, _mm256_set1_pd(dcol), _mm256_set1_pd(col0));
  const __m256d row_step = _mm256_set1_pd(4.0 * drow);
  const __m256d col_step = _mm256_set1_pd(4.0 * dcol);
  const __m128i ones = _mm_set1_epi32(1);
  const __m128i max_row = _mm_set1_epi32(height - 1);
  const __m128i max_col = _mm_set1_epi32(width - 1);
  const __m128i vwidth = _mm_set1_epi32(width);
  const __m256d one = _mm256_set1_pd(1.0);

  __m256d acc = _mm256_setzero_pd();
  int i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d rf = _mm256_floor_pd(row);
    const __m256d cf = _mm256_floor_pd(col);
    const __m256d fr = _mm256_sub_pd(row, rf);
    const __m256d fc = _mm256_sub_pd(col, cf);
    const __m128i r0 = _mm256_cvtpd_epi32(rf);
    const __m128i c0 = _mm256_cvtpd_epi32(cf);
    const __m128i r1 = _mm_min_epi32(_mm_add_epi32(r0, ones), max_row);
    const __m128i c1 = _mm_min_epi32(_mm_add_epi32(c0, ones), max_col);
    const __m128i base0 = _mm_mullo_epi32(r0, vwidth);
    const __m128i base1 = _mm_mullo_epi32(r1, vwidth);
    const __m256d v00 = _mm256_cvtps_pd(_mm_i32gather_ps(img, _mm_add_epi32(base0, c0), 4));
    const __m256d v01 = _mm256_cvtps_pd(_mm_i32gather_ps(img, _mm_add_epi32(base0, c1), 4));
    const __m256d v10 = _mm256_cvtps_pd(_mm_i32gather_ps(img, _mm_add_epi32(base1, c0), 4));
    const __m256d v11 = _mm256_cvtps_pd(_mm_i32gather_ps(img, _mm_add_epi32(base1, c1), 4));
    const __m256d gr = _mm256_sub_pd(one, fr);
    const __m256d gc = _mm256_sub_pd(one, fc);
    const __m256d top = _mm256_add_pd(_mm256_mul_pd(gc, v00), _mm256_mul_pd(fc, v01));
    const __m256d bot = _mm256_add_pd(_mm256_mul_pd(gc, v10), _mm256_mul_pd(fc, v11));
    acc = _mm256_add_pd(acc, _mm256_add_pd(_mm256_mul_pd(gr, top), _mm256_mul_pd(fr, bot)));
    row = _mm256_add_pd(row, row_step);
    col = _mm256_add_pd(col, col_step);
  }
  double sum = hsum(acc);
  for (; i < n; ++i) {
    const double rown = row0 + i * drow;
    const double coln = col0 + i * dcol;
    const int r0 = static_cast<int>(std::floor(rown));
    const int c0 = static_cast<int>(std::floor(coln));
    const double fr = rown - r0;
    const double fc = coln - c0;
    const int r1 = std::min(r0 + 1, height - 1);
    const int c1 = std::min(c0 + 1, width - 1);
    const double v00 = img[static_cast<std::size_t>(r0) * width + c0];
    const double v01 = img[static_cast<std::size_t>(r0) * width + c1];
    const double v10 = img[static_cast<std::size_t>(r1) * width + c0];
    const double v11 = img[static_cast<std::size_t>(r1) * width + c1];
    sum += (1.0 - fr) * ((1.0 - fc) * v00 + fc * v01) + fr * ((1.0 - fc) * v10 + fc * v11);
  }
  return sum;
}

void local_contrast(const float* img, int width, int height, float* out) {
  for (int r = 0; r < height; ++r) {
    const int rm = std::max(r - 1, 0), rp = std::min(r + 1, height - 1);
    const float* mid = img + static_cast<std::size_t>(r) * width;
    const float* up = img + static_cast<std::size_t>(rm) * width;
    const float* dn = img + static_cast<std::size_t>(rp) * width;
    float* dst = out + static_cast<std::size_t>(r) * width;

    auto scalar_px = [&](int c) {
      const int cm = std::max(c - 1, 0), cp = std::min(c + 1, width - 1);
      const float v = mid[c];
      float m = std::abs(v - mid[cm]);
      m = std::max(m, std::abs(v - mid[cp]));
      m = std::max(m, std::abs(v - up[c]));
      m = std::max(m, std::abs(v - dn[c]));
      dst[c] = m;
    };

    if (width < 10) {
      for (int c = 0; c < width; ++c) scalar_px(c);
      continue;
    }
    scalar_px(0);
    int c = 1;
    for (; c + 8 <= width - 1; c += 8) {
      const __m256 v = _mm256_loadu_ps(mid + c);
      __m256 m = abs_ps(_mm256_sub_ps(v, _mm256_loadu_ps(mid + c - 1)));
      m = _mm256_max_ps(m, abs_ps(_mm256_sub_ps(v, _mm256_loadu_ps(mid + c + 1))));
      m = _mm256_max_ps(m, abs_ps(_mm256_sub_ps(v, _mm256_loadu_ps(up + c))));
      m = _mm256_max_ps(m, abs_ps(_mm256_sub_ps(v, _mm256_loadu_ps(dn + c))));
      _mm256_storeu_ps(dst + c, m);
    }
    for (; c < width; ++c) scalar_px(c);
  }
}

void box_mean3(const float* img, int width, int height, float* out) {
  constexpr float kInv9 = 1.0f / 9.0f;
  const __m256 vinv9 = _mm256_set1_ps(kInv9);
  for (int r = 0; r < height; ++r) {
    const int rm = std::max(r - 1, 0), rp = std::min(r + 1, height - 1);
    const float* mid = img + static_cast<std::size_t>(r) * width;
    const float* up = img + static_cast<std::size_t>(rm) * width;
    const float* dn = img + static_cast<std::size_t>(rp) * width;
    float* dst = out + static_cast<std::size_t>(r) * width;

    auto scalar_px = [&](int c) {
      const int cm = std::max(c - 1, 0), cp = std::min(c + 1, width - 1);
      float sum = 0.0f;
      sum += up[cm] + up[c] + up[cp];
      sum += mid[cm] + mid[c] + mid[cp];
      sum += dn[cm] + dn[c] + dn[cp];
      dst[c] = sum * kInv9;
    };

    if (width < 10) {
      for (int c = 0; c < width; ++c) scalar_px(c);
      continue;
    }
    scalar_px(0);
    int c = 1;
    for (; c + 8 <= width - 1; c += 8) {
      const __m256 tu = _mm256_add_ps(
          _mm256_add_ps(_mm256_loadu_ps(up + c - 1), _mm256_loadu_ps(up + c)),
          _mm256_loadu_ps(up + c + 1));
      const __m256 tm = _mm256_add_ps(
          _mm256_add_ps(_mm256_loadu_ps(mid + c - 1), _mm256_loadu_ps(mid + c)),
          _mm256_loadu_ps(mid + c + 1));
      const __m256 td = _mm256_add_ps(
          _mm256_add_ps(_mm256_loadu_ps(dn + c - 1), _mm256_loadu_ps(dn + c)),
          _mm256_loadu_ps(dn + c + 1));
      const __m256 total = _mm256_add_ps(_mm256_add_ps(tu, tm), td);
      _mm256_storeu_ps(dst + c, _mm256_mul_ps(total, vinv9));
    }
    for (; c < width; ++c) scalar_px(c);
  }
}

void abs_diff(const float* a, const float* b, std::size_t n, float* out) {
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(out + i, abs_ps(_mm256_sub_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i))));
  }
  for (; i < n; ++i) out[i] = std::abs(a[i] - b[i]);
}

}  // namespace lodestar::kernels::avx2_impl

#endif  // LODESTAR_HAVE_AVX2
