// Copyright 2026 The cxlpredict Authors
// SPDX-License-Identifier: Apache-2.0

// Compiled with -mavx2 -ffp-contract=off; only reachable through the
// dispatcher after a cpuid probe.

#include "cxlpredict/kernels.hpp"

#ifdef CXLPREDICT_KERNELS_HAVE_AVX2

#include <immintrin.h>

#include <algorithm>

namespace cxlpredict::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

}  // namespace

double sum(std::span<const double> xs) {
  std::size_t i = 0;
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= xs.size(); i += 4) {
    acc = _mm256_add_pd(acc, _mm256_loadu_pd(xs.data() + i));
  }
  double tail = 0.0;
  for (; i < xs.size(); ++i) tail += xs[i];
  return hsum(acc) + tail;
}

double sum_shifted(std::span<const double> xs, double shift) {
  std::size_t i = 0;
  const __m256d c = _mm256_set1_pd(shift);
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= xs.size(); i += 4) {
    acc = _mm256_add_pd(acc, _mm256_add_pd(_mm256_loadu_pd(xs.data() + i), c));
  }
  double tail = 0.0;
  for (; i < xs.size(); ++i) tail += xs[i] + shift;
  return hsum(acc) + tail;
}

double sum_max_shifted(std::span<const double> xs, double floor_value,
                       double shift) {
  std::size_t i = 0;
  const __m256d c = _mm256_set1_pd(shift);
  const __m256d floor_v = _mm256_set1_pd(floor_value);
  __m256d acc = _mm256_setzero_pd();
  for (; i + 4 <= xs.size(); i += 4) {
    __m256d shifted = _mm256_add_pd(_mm256_loadu_pd(xs.data() + i), c);
    acc = _mm256_add_pd(acc, _mm256_max_pd(floor_v, shifted));
  }
  double tail = 0.0;
  for (; i < xs.size(); ++i) tail += std::max(floor_value, xs[i] + shift);
  return hsum(acc) + tail;
}

}  // namespace cxlpredict::kernels::avx2

#endif  // CXLPREDICT_KERNELS_HAVE_AVX2
