// Copyright 2026 The cxlpredict Authors
// SPDX-License-Identifier: Apache-2.0

#include "cxlpredict/kernels.hpp"

namespace cxlpredict::kernels {

namespace {

Backend detect() {
#if defined(CXLPREDICT_KERNELS_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  if (__builtin_cpu_supports("avx2")) return Backend::Avx2;
#endif
  return Backend::Scalar;
}

}  // namespace

Backend active_backend() {
  static const Backend backend = detect();
  return backend;
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
  }
  return "?";
}

double sum(std::span<const double> xs) {
#ifdef CXLPREDICT_KERNELS_HAVE_AVX2
  if (active_backend() == Backend::Avx2) return avx2::sum(xs);
#endif
  return scalar::sum(xs);
}

double sum_shifted(std::span<const double> xs, double shift) {
#ifdef CXLPREDICT_KERNELS_HAVE_AVX2
  if (active_backend() == Backend::Avx2) return avx2::sum_shifted(xs, shift);
#endif
  return scalar::sum_shifted(xs, shift);
}

double sum_max_shifted(std::span<const double> xs, double floor_value,
                       double shift) {
#ifdef CXLPREDICT_KERNELS_HAVE_AVX2
  if (active_backend() == Backend::Avx2) {
    return avx2::sum_max_shifted(xs, floor_value, shift);
  }
#endif
  return scalar::sum_max_shifted(xs, floor_value, shift);
}

}  // namespace cxlpredict::kernels
