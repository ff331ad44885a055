// Copyright 2026 The cxlpredict Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "cxlpredict/params.hpp"
#include "cxlpredict/types.hpp"

namespace cxlpredict {

/// Per-rank characterization metrics, each a fraction of the relevant peak
/// or instruction count:
///   val_mbw     socket memory throughput / peak_mem_bw
///   val_mlat    L3 load misses / all loads
///   val_cbw_l1  L1 load throughput / peak_l1_bw
///   val_cbw_l2  L2 fill throughput / peak_l2_bw
///   val_clat    loads reaching L2 / all loads
struct RawMetrics {
  double val_mbw = 0.0;
  double val_mlat = 0.0;
  double val_cbw_l1 = 0.0;
  double val_cbw_l2 = 0.0;
  double val_clat = 0.0;
};

/// Quadratic threshold weight: 0 at or below lower, 1 at or above upper,
/// ((val-lower)/(upper-lower))^2 in between. Monotone and continuous.
double weight(double val, const ThresholdPair& thr);

/// Mean bytes_read over the rank's modelable samples; 8 when it has none.
double mean_bytes_read_for_rank(std::span<const LoadSample> samples,
                                std::int32_t rank);

/// Computes the five raw metrics for one rank. The socket MBW value is
/// shared by all ranks on the socket; avg_load_width comes from the rank's
/// samples (mean_bytes_read_for_rank). Throws when the rank is missing or
/// recorded no loads.
RawMetrics metrics(const CounterSummary& counters, const ModelParams& p,
                   std::int32_t rank, double avg_load_width);

/// Footnote-style normalization over an active category set: a sub-1 sum is
/// topped up from Compute (capped at compute_max_weight) and any remainder is
/// split equally over the non-Compute categories; an over-1 sum divides every
/// component by the sum.
struct NormalizedSet {
  std::vector<double> non_compute;
  double compute = 0.0;
};
NormalizedSet normalize_weight_set(std::vector<double> non_compute,
                                   double compute, double compute_max_weight);

/// Raw metrics -> the five normalized category weights (subsequent-load set).
/// MLAT deducts MBW, CLAT deducts everything above it, both floored at 0.
Weights compose_weights(const RawMetrics& m, const ModelParams& p);

/// Restricts a normalized weight set to {MBW, MLAT, Compute} for first
/// loads, renormalizing by the same procedure over the three categories.
Weights first_load_weights(const Weights& w, const ModelParams& p);

}  // namespace cxlpredict
