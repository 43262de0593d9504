#include "magicsq/kernels.hpp"

#include <cmath>

#if defined(__x86_64__) || defined(_M_X64)
#define MAGICSQ_X86 1
#include <immintrin.h>
#else
#define MAGICSQ_X86 0
#endif

namespace magicsq::kernels::avx2 {

#if MAGICSQ_X86

bool available() { return __builtin_cpu_supports("avx2"); }

#define MAGICSQ_AVX2 __attribute__((target("avx2,fma")))

namespace {

MAGICSQ_AVX2 inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

}  // namespace

MAGICSQ_AVX2 double sum(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double s = hsum(acc);
  for (; i < n; ++i) s += x[i];
  return s;
}

MAGICSQ_AVX2 double product(const double* x, std::size_t n) {
  __m256d acc = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_mul_pd(acc, _mm256_loadu_pd(x + i));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double p = (lanes[0] * lanes[1]) * (lanes[2] * lanes[3]);
  for (; i < n; ++i) p *= x[i];
  return p;
}

MAGICSQ_AVX2 void scale(double* x, std::size_t n, double f) {
  const __m256d vf = _mm256_set1_pd(f);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), vf));
  for (; i < n; ++i) x[i] *= f;
}

MAGICSQ_AVX2 void add(double* y, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) y[i] += x[i];
}

MAGICSQ_AVX2 void sub(double* y, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_sub_pd(_mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) y[i] -= x[i];
}

MAGICSQ_AVX2 void mul(double* y, const double* x, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_mul_pd(_mm256_loadu_pd(y + i), _mm256_loadu_pd(x + i)));
  for (; i < n; ++i) y[i] *= x[i];
}

MAGICSQ_AVX2 double max_abs_dev(const double* x, std::size_t n, double c) {
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), vc);
    acc = _mm256_max_pd(acc, _mm256_andnot_pd(sign_mask, d));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; i < n; ++i) m = std::max(m, std::fabs(x[i] - c));
  return m;
}

#else  // !MAGICSQ_X86

bool available() { return false; }
double sum(const double* x, std::size_t n) { return scalar::sum(x, n); }
double product(const double* x, std::size_t n) { return scalar::product(x, n); }
void scale(double* x, std::size_t n, double f) { scalar::scale(x, n, f); }
void add(double* y, const double* x, std::size_t n) { scalar::add(y, x, n); }
void sub(double* y, const double* x, std::size_t n) { scalar::sub(y, x, n); }
void mul(double* y, const double* x, std::size_t n) { scalar::mul(y, x, n); }
double max_abs_dev(const double* x, std::size_t n, double c) {
  return scalar::max_abs_dev(x, n, c);
}

#endif

}  // namespace magicsq::kernels::avx2
