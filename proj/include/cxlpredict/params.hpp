// Copyright 2026 The cxlpredict Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>

#include "cxlpredict/types.hpp"

namespace cxlpredict {

/// Quadratic-weight threshold pair, both fractions, lower < upper.
struct ThresholdPair {
  double lower = 0.0;
  double upper = 1.0;

  bool operator==(const ThresholdPair&) const = default;
};

/// All hardware/middleware parameters of the model. Durations are
/// nanoseconds, throughputs bytes/second, cpu_freq cycles/second, thresholds
/// fractions of the respective peak. Defaults are the single-node
/// Optane-backed preset; peak_l1_bw has no benchmarkable default and must be
/// set per machine.
struct ModelParams {
  double mpi_lat = 320.0;           // MPI point-to-point latency
  double mpi_bw = 9.444e9;          // MPI point-to-point bandwidth
  double cxl_lat = 417.0;           // CXL load latency
  double mem_lat = 86.0;            // local DDR load latency
  double cxl_atomic_lat = 653.0;    // atomic operation on CXL

  double lpf_lat = 1.5;             // latency-limited load parallelism, >= 1
  double lpf_bw = 3.0;              // bandwidth-limited load parallelism, >= 1
  double compute_max_weight = 0.5;  // cap on the Compute remainder, in [0,1]

  ThresholdPair thr_mbw{0.03, 0.33};
  ThresholdPair thr_mlat{0.01, 0.20};
  ThresholdPair thr_cbw{0.10, 0.75};
  ThresholdPair thr_clat{0.05, 0.50};

  double peak_mem_bw = 73e9;   // socket memory peak
  double peak_l1_bw = 300e9;   // site-specific, no benchmarked default
  double peak_l2_bw = 52e9;

  double cpu_freq = 2.4e9;     // converts sample latency cycles to time
  double sampling_rate = 1.0;  // loads represented by one sample, >= 1
  double cache_line = 64.0;    // bytes

  bool operator==(const ModelParams&) const = default;
};

/// Returns p unchanged iff every invariant holds; otherwise throws an Error
/// naming the offending field. Idempotent.
ModelParams validate_params(ModelParams p);

/// Sample latencies arrive in CPU cycles; all model arithmetic runs in
/// nanoseconds, so the conversion happens exactly once at ingestion.
double cycles_to_ns(double cycles, const ModelParams& p);
double ns_to_cycles(double ns, const ModelParams& p);

/// lpf_lat for the latency-limited categories (Mlat, Clat), lpf_bw otherwise.
double lpf_for(Category c, const ModelParams& p);

/// Flat key/value JSON with exactly the field names above; thresholds as
/// [lower, upper] pairs. Parsing validates.
ModelParams parse_params_json(const std::string& text);
ModelParams load_params(const std::filesystem::path& path);
std::string params_to_json(const ModelParams& p);

}  // namespace cxlpredict
