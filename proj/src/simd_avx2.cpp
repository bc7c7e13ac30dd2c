// AVX2 + FMA variants. This translation unit is compiled with -mavx2 -mfma and
// must only be entered after the dispatcher has checked the CPU flags.

#include "psg/simd.hpp"

#include <immintrin.h>

#include <cassert>
#include <cmath>

namespace psg::simd::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

inline double hmax(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d m = _mm_max_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_max_sd(m, _mm_unpackhi_pd(m, m)));
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  const double* pa = a.data();
  const double* pb = b.data();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i + 4), _mm256_loadu_pd(pb + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += pa[i] * pb[i];
  return acc;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  const std::size_t n = x.size();
  const double* px = x.data();
  double* py = y.data();
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(py + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(px + i), _mm256_loadu_pd(py + i)));
  }
  for (; i < n; ++i) py[i] += alpha * px[i];
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  const std::size_t n = a.size();
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d m = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
    m = _mm256_max_pd(m, _mm256_andnot_pd(sign_mask, d));
  }
  double r = hmax(m);
  for (; i < n; ++i) r = std::fmax(r, std::fabs(a[i] - b[i]));
  return r;
}

void or_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
  assert(dst.size() == src.size());
  const std::size_t n = dst.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    auto* d = reinterpret_cast<__m256i*>(dst.data() + i);
    const auto* s = reinterpret_cast<const __m256i*>(src.data() + i);
    _mm256_storeu_si256(d, _mm256_or_si256(_mm256_loadu_si256(d), _mm256_loadu_si256(s)));
  }
  for (; i < n; ++i) dst[i] |= src[i];
}

void and_into(std::span<std::uint64_t> dst, std::span<const std::uint64_t> src) {
  assert(dst.size() == src.size());
  const std::size_t n = dst.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    auto* d = reinterpret_cast<__m256i*>(dst.data() + i);
    const auto* s = reinterpret_cast<const __m256i*>(src.data() + i);
    _mm256_storeu_si256(d, _mm256_and_si256(_mm256_loadu_si256(d), _mm256_loadu_si256(s)));
  }
  for (; i < n; ++i) dst[i] &= src[i];
}

}  // namespace psg::simd::avx2
