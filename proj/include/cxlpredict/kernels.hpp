// Copyright 2026 The cxlpredict Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>

// Reduction kernels for the access-cost inner loops. Every per-category cost
// is a sum over per-sample latencies of one of three shapes:
//
//   sum(x)                    plain latency total
//   sum_shifted(x, c)         sum of (x + c), the fixed-penalty brackets
//   sum_max_shifted(x, k, c)  sum of max(k, x + c), the congestion brackets
//
// scalar:: is the reference implementation; avx2:: (x86-64 only) must agree
// with it up to floating-point reassociation. The unqualified entry points
// dispatch once per process to the best variant the CPU supports. All inputs
// are non-negative latencies in nanoseconds, so reassociation error stays
// within ~n*eps relative with no cancellation.

namespace cxlpredict::kernels {

namespace scalar {
double sum(std::span<const double> xs);
double sum_shifted(std::span<const double> xs, double shift);
double sum_max_shifted(std::span<const double> xs, double floor_value,
                       double shift);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define CXLPREDICT_KERNELS_HAVE_AVX2 1
namespace avx2 {
double sum(std::span<const double> xs);
double sum_shifted(std::span<const double> xs, double shift);
double sum_max_shifted(std::span<const double> xs, double floor_value,
                       double shift);
}  // namespace avx2
#endif

enum class Backend { Scalar, Avx2 };

/// Variant selected for this process (CPU feature probe, cached).
Backend active_backend();
const char* backend_name(Backend b);

double sum(std::span<const double> xs);
double sum_shifted(std::span<const double> xs, double shift);
double sum_max_shifted(std::span<const double> xs, double floor_value,
                       double shift);

}  // namespace cxlpredict::kernels
