#include "lodestar/kernels.hpp"

#include <cstdlib>
#include <cstring>

#include "kernels_internal.hpp"

namespace lodestar::kernels {

namespace {

struct Table {
  double (*dot)(const double*, const double*, std::size_t);
  void (*circular_correlate)(const double*, const double*, std::size_t, double*);
  double (*bilinear_ray_sum)(const float*, int, int, double, double, double, double, int);
  void (*local_contrast)(const float*, int, int, float*);
  void (*box_mean3)(const float*, int, int, float*);
  void (*abs_diff)(const float*, const float*, std::size_t, float*);
};

constexpr Table kScalarTable = {
    scalar_impl::dot,           scalar_impl::circular_correlate, scalar_impl::bilinear_ray_sum,
    scalar_impl::local_contrast, scalar_impl::box_mean3,         scalar_impl::abs_diff,
};

#if defined(LODESTAR_HAVE_AVX2)
constexpr Table kAvx2Table = {
    avx2_impl::dot,           avx2_impl::circular_correlate, avx2_impl::bilinear_ray_sum,
    avx2_impl::local_contrast, avx2_impl::box_mean3,         avx2_impl::abs_diff,
};
#endif

bool cpu_has_avx2() {
#if defined(LODESTAR_HAVE_AVX2)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

struct State {
  Backend backend;
  const Table* table;
};

State resolve_default() {
  Backend want = cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
  if (const char* env = std::getenv("LODESTAR_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) want = Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) want = Backend::avx2;
  }
#if defined(LODESTAR_HAVE_AVX2)
  if (want == Backend::avx2) return {Backend::avx2, &kAvx2Table};
#endif
  return {Backend::scalar, &kScalarTable};
}

State& state() {
  static State s = resolve_default();
  return s;
}

}  // namespace

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
  }
  return "?";
}

Backend active_backend() { return state().backend; }

bool backend_supported(Backend b) {
  if (b == Backend::scalar) return true;
  return cpu_has_avx2();
}

bool set_backend(Backend b) {
  if (!backend_supported(b)) return false;
  if (b == Backend::scalar) {
    state() = {Backend::scalar, &kScalarTable};
    return true;
  }
#if defined(LODESTAR_HAVE_AVX2)
  state() = {Backend::avx2, &kAvx2Table};
  return true;
#else
  return false;
#endif
}

double dot(const double* a, const double* b, std::size_t n) { return state().table->dot(a, b, n); }

void circular_correlate(const double* a, const double* b, std::size_t n, double* out) {
  state().table->circular_correlate(a, b, n, out);
}

double bilinear_ray_sum(const float* img, int width, int height, double row0, double col0,
                        double drow, double dcol, int n) {
  return state().table->bilinear_ray_sum(img, width, height, row0, col0, drow, dcol, n);
}

void local_contrast(const float* img, int width, int height, float* out) {
  state().table->local_contrast(img, width, height, out);
}

void box_mean3(const float* img, int width, int height, float* out) {
  state().table->box_mean3(img, width, height, out);
}

void abs_diff(const float* a, const float* b, std::size_t n, float* out) {
  state().table->abs_diff(a, b, n, out);
}

}  // namespace lodestar::kernels
