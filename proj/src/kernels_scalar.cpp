// Copyright 2026 The cxlpredict Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>

#include "cxlpredict/kernels.hpp"

namespace cxlpredict::kernels::scalar {

double sum(std::span<const double> xs) {
  double acc = 0.0;
  for (double x : xs) acc += x;
  return acc;
}

double sum_shifted(std::span<const double> xs, double shift) {
  double acc = 0.0;
  for (double x : xs) acc += x + shift;
  return acc;
}

double sum_max_shifted(std::span<const double> xs, double floor_value,
                       double shift) {
  double acc = 0.0;
  for (double x : xs) acc += std::max(floor_value, x + shift);
  return acc;
}

}  // namespace cxlpredict::kernels::scalar
