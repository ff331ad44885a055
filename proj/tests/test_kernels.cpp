// Copyright 2026 The cxlpredict Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>
#include <vector>

#include "cxlpredict/kernels.hpp"

namespace ker = cxlpredict::kernels;

namespace {

std::vector<double> random_latencies(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<double> xs(n);
  for (auto& x : xs) {
    x = 1.0 + static_cast<double>(rng() % 100000) / 100.0;  // 1 .. 1001 ns
  }
  return xs;
}

void check_close(double a, double b) {
  double scale = std::max({1.0, std::abs(a), std::abs(b)});
  CHECK(std::abs(a - b) <= 1e-12 * scale);
}

}  // namespace

TEST_CASE("scalar kernels on tiny exact inputs") {
  std::vector<double> xs = {10.0, 20.0, 30.0};
  CHECK(ker::scalar::sum(xs) == 60.0);
  CHECK(ker::scalar::sum_shifted(xs, 5.0) == 75.0);
  // max(25, x + 4): 25 + 25 + 34
  CHECK(ker::scalar::sum_max_shifted(xs, 25.0, 4.0) == 84.0);
  CHECK(ker::scalar::sum({}) == 0.0);
  CHECK(ker::scalar::sum_shifted({}, 99.0) == 0.0);
  CHECK(ker::scalar::sum_max_shifted({}, 99.0, 1.0) == 0.0);
}

TEST_CASE("dispatched kernels agree with scalar reference") {
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 31u, 1000u,
                        10000u}) {
    std::vector<double> xs = random_latencies(n, 1000 + n);
    check_close(ker::sum(xs), ker::scalar::sum(xs));
    check_close(ker::sum_shifted(xs, 331.0), ker::scalar::sum_shifted(xs, 331.0));
    check_close(ker::sum_max_shifted(xs, 417.0, 331.0),
                ker::scalar::sum_max_shifted(xs, 417.0, 331.0));
    // Negative shift exercises the max floor from both sides.
    check_close(ker::sum_max_shifted(xs, 86.0, -50.0),
                ker::scalar::sum_max_shifted(xs, 86.0, -50.0));
  }
}

#ifdef CXLPREDICT_KERNELS_HAVE_AVX2
TEST_CASE("avx2 kernels agree with scalar reference when available") {
  if (ker::active_backend() != ker::Backend::Avx2) {
    MESSAGE("AVX2 not available on this CPU; variant untested here");
    return;
  }
  for (std::size_t n : {1u, 4u, 5u, 8u, 64u, 1023u, 4096u}) {
    std::vector<double> xs = random_latencies(n, 77 + n);
    check_close(ker::avx2::sum(xs), ker::scalar::sum(xs));
    check_close(ker::avx2::sum_shifted(xs, -86.0),
                ker::scalar::sum_shifted(xs, -86.0));
    check_close(ker::avx2::sum_max_shifted(xs, 417.0, 331.0),
                ker::scalar::sum_max_shifted(xs, 417.0, 331.0));
  }
}
#endif
