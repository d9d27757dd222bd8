#include "fracmems/kernels.hpp"

#include <algorithm>
#include <cmath>

#if defined(__x86_64__) || defined(_M_X64)
#define FRACMEMS_X86 1
#include <immintrin.h>
#else
#define FRACMEMS_X86 0
#endif

#if defined(__aarch64__) || defined(__ARM_NEON)
#define FRACMEMS_NEON 1
#include <arm_neon.h>
#else
#define FRACMEMS_NEON 0
#endif

namespace fracmems::kern {

// ---------------------------------------------------------------------------
// Scalar reference kernels
// ---------------------------------------------------------------------------

namespace {

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double weighted_dot_scalar(const double* w, const double* x, const double* y,
                           std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * x[i] * y[i];
  return acc;
}

double sup_abs_diff_scalar(const double* x, const double* y, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::fabs(x[i] - y[i]));
  return m;
}

double min_gap_scalar(const double* a, const double* v, std::size_t n) {
  double m = a[0] - v[0];
  for (std::size_t i = 1; i < n; ++i) m = std::min(m, a[i] - v[i]);
  return m;
}

void inv_sq_scale_scalar(double lam, const double* a, const double* v,
                         double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double g = a[i] - v[i];
    out[i] = lam / (g * g);
  }
}

void matvec_scalar(const double* A, const double* x, double* y,
                   std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r)
    y[r] = dot_scalar(A + r * cols, x, cols);
}

// ---------------------------------------------------------------------------
// AVX2 + FMA kernels
// ---------------------------------------------------------------------------

#if FRACMEMS_X86

__attribute__((target("avx2,fma"))) void axpy_avx2(double a, const double* x,
                                                   double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

__attribute__((target("avx2,fma"))) double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

__attribute__((target("avx2,fma"))) double dot_avx2(const double* x,
                                                    const double* y,
                                                    std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i),
                           acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4),
                           _mm256_loadu_pd(y + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4)
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i),
                           acc0);
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

__attribute__((target("avx2,fma"))) double weighted_dot_avx2(
    const double* w, const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d wx =
        _mm256_mul_pd(_mm256_loadu_pd(w + i), _mm256_loadu_pd(x + i));
    acc = _mm256_fmadd_pd(wx, _mm256_loadu_pd(y + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += w[i] * x[i] * y[i];
  return s;
}

__attribute__((target("avx2,fma"))) double sup_abs_diff_avx2(const double* x,
                                                             const double* y,
                                                             std::size_t n) {
  const __m256d signmask = _mm256_set1_pd(-0.0);
  __m256d vm = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d =
        _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i));
    vm = _mm256_max_pd(vm, _mm256_andnot_pd(signmask, d));
  }
  double lanes[4];
  _mm256_storeu_pd(lanes, vm);
  double m = std::max(std::max(lanes[0], lanes[1]),
                      std::max(lanes[2], lanes[3]));
  for (; i < n; ++i) m = std::max(m, std::fabs(x[i] - y[i]));
  return m;
}

__attribute__((target("avx2,fma"))) double min_gap_avx2(const double* a,
                                                        const double* v,
                                                        std::size_t n) {
  std::size_t i = 0;
  double m = a[0] - v[0];
  if (n >= 4) {
    __m256d vm =
        _mm256_sub_pd(_mm256_loadu_pd(a), _mm256_loadu_pd(v));
    for (i = 4; i + 4 <= n; i += 4)
      vm = _mm256_min_pd(
          vm, _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(v + i)));
    double lanes[4];
    _mm256_storeu_pd(lanes, vm);
    m = std::min(std::min(lanes[0], lanes[1]),
                 std::min(lanes[2], lanes[3]));
  }
  for (; i < n; ++i) m = std::min(m, a[i] - v[i]);
  return m;
}

__attribute__((target("avx2,fma"))) void inv_sq_scale_avx2(
    double lam, const double* a, const double* v, double* out,
    std::size_t n) {
  const __m256d vlam = _mm256_set1_pd(lam);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d g =
        _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(v + i));
    _mm256_storeu_pd(out + i, _mm256_div_pd(vlam, _mm256_mul_pd(g, g)));
  }
  for (; i < n; ++i) {
    const double g = a[i] - v[i];
    out[i] = lam / (g * g);
  }
}

__attribute__((target("avx2,fma"))) void matvec_avx2(const double* A,
                                                     const double* x,
                                                     double* y,
                                                     std::size_t rows,
                                                     std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_avx2(A + r * cols, x, cols);
}

#endif  // FRACMEMS_X86

// ---------------------------------------------------------------------------
// NEON kernels
// ---------------------------------------------------------------------------

#if FRACMEMS_NEON

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = vfmaq_f64(acc, vld1q_f64(x + i), vld1q_f64(y + i));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

double weighted_dot_neon(const double* w, const double* x, const double* y,
                         std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t wx = vmulq_f64(vld1q_f64(w + i), vld1q_f64(x + i));
    acc = vfmaq_f64(acc, wx, vld1q_f64(y + i));
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += w[i] * x[i] * y[i];
  return s;
}

double sup_abs_diff_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t vm = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vm = vmaxq_f64(vm, vabsq_f64(vsubq_f64(vld1q_f64(x + i),
                                           vld1q_f64(y + i))));
  double m = vmaxvq_f64(vm);
  for (; i < n; ++i) m = std::max(m, std::fabs(x[i] - y[i]));
  return m;
}

double min_gap_neon(const double* a, const double* v, std::size_t n) {
  std::size_t i = 0;
  double m = a[0] - v[0];
  if (n >= 2) {
    float64x2_t vm = vsubq_f64(vld1q_f64(a), vld1q_f64(v));
    for (i = 2; i + 2 <= n; i += 2)
      vm = vminq_f64(vm, vsubq_f64(vld1q_f64(a + i), vld1q_f64(v + i)));
    m = vminvq_f64(vm);
  }
  for (; i < n; ++i) m = std::min(m, a[i] - v[i]);
  return m;
}

void inv_sq_scale_neon(double lam, const double* a, const double* v,
                       double* out, std::size_t n) {
  const float64x2_t vlam = vdupq_n_f64(lam);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t g = vsubq_f64(vld1q_f64(a + i), vld1q_f64(v + i));
    vst1q_f64(out + i, vdivq_f64(vlam, vmulq_f64(g, g)));
  }
  for (; i < n; ++i) {
    const double g = a[i] - v[i];
    out[i] = lam / (g * g);
  }
}

void matvec_neon(const double* A, const double* x, double* y,
                 std::size_t rows, std::size_t cols) {
  for (std::size_t r = 0; r < rows; ++r) y[r] = dot_neon(A + r * cols, x, cols);
}

#endif  // FRACMEMS_NEON

// ---------------------------------------------------------------------------
// Dispatch table
// ---------------------------------------------------------------------------

struct Vtable {
  void (*axpy)(double, const double*, double*, std::size_t);
  double (*dot)(const double*, const double*, std::size_t);
  double (*weighted_dot)(const double*, const double*, const double*,
                         std::size_t);
  double (*sup_abs_diff)(const double*, const double*, std::size_t);
  double (*min_gap)(const double*, const double*, std::size_t);
  void (*inv_sq_scale)(double, const double*, const double*, double*,
                       std::size_t);
  void (*matvec)(const double*, const double*, double*, std::size_t,
                 std::size_t);
};

constexpr Vtable kScalar = {axpy_scalar,    dot_scalar,
                            weighted_dot_scalar, sup_abs_diff_scalar,
                            min_gap_scalar, inv_sq_scale_scalar,
                            matvec_scalar};

#if FRACMEMS_X86
constexpr Vtable kAvx2 = {axpy_avx2,    dot_avx2,          weighted_dot_avx2,
                          sup_abs_diff_avx2, min_gap_avx2, inv_sq_scale_avx2,
                          matvec_avx2};
#endif
#if FRACMEMS_NEON
constexpr Vtable kNeon = {axpy_neon,    dot_neon,          weighted_dot_neon,
                          sup_abs_diff_neon, min_gap_neon, inv_sq_scale_neon,
                          matvec_neon};
#endif

bool avx2_supported() {
#if FRACMEMS_X86
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

bool neon_supported() { return FRACMEMS_NEON != 0; }

Backend detect_backend() {
  if (avx2_supported()) return Backend::Avx2;
  if (neon_supported()) return Backend::Neon;
  return Backend::Scalar;
}

const Vtable* table_for(Backend b) {
  switch (b) {
#if FRACMEMS_X86
    case Backend::Avx2:
      return &kAvx2;
#endif
#if FRACMEMS_NEON
    case Backend::Neon:
      return &kNeon;
#endif
    default:
      return &kScalar;
  }
}

Backend g_backend = detect_backend();
const Vtable* g_vt = table_for(g_backend);

}  // namespace

Backend active_backend() { return g_backend; }

bool force_backend(Backend b) {
  if (b == Backend::Avx2 && !avx2_supported()) return false;
  if (b == Backend::Neon && !neon_supported()) return false;
  g_backend = b;
  g_vt = table_for(b);
  return true;
}

void reset_backend() {
  g_backend = detect_backend();
  g_vt = table_for(g_backend);
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::Avx2:
      return "avx2";
    case Backend::Neon:
      return "neon";
    default:
      return "scalar";
  }
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  g_vt->axpy(a, x, y, n);
}

double dot(const double* x, const double* y, std::size_t n) {
  return g_vt->dot(x, y, n);
}

double weighted_dot(const double* w, const double* x, const double* y,
                    std::size_t n) {
  return g_vt->weighted_dot(w, x, y, n);
}

double sup_abs_diff(const double* x, const double* y, std::size_t n) {
  return g_vt->sup_abs_diff(x, y, n);
}

double min_gap(const double* a, const double* v, std::size_t n) {
  return g_vt->min_gap(a, v, n);
}

void inv_sq_scale(double lam, const double* a, const double* v, double* out,
                  std::size_t n) {
  g_vt->inv_sq_scale(lam, a, v, out, n);
}

void matvec(const double* A, const double* x, double* y, std::size_t rows,
            std::size_t cols) {
  g_vt->matvec(A, x, y, rows, cols);
}

}  // namespace fracmems::kern
