// Copyright 2026 The cxlpredict Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cxlpredict/attribute.hpp"
#include "cxlpredict/params.hpp"
#include "cxlpredict/types.hpp"

namespace cxlpredict {

// Transfer and data-access cost models. Transfers: MPI follows the Hockney
// form latency + size/bandwidth per message; CXL pays two atomic
// synchronization latencies per exchange and nothing per byte. Access costs
// weight per-category latency reductions over the attributed samples, where
// each category prices the cache-hit / line-fill-buffer / miss brackets
// differently (see access_cxl_category).

/// Sample latencies of one population converted to nanoseconds and grouped
/// by bracket; the reduction kernels run over these arrays.
struct BracketLatencies {
  std::vector<double> hit_ns;
  std::vector<double> lfb_ns;
  std::vector<double> miss_ns;

  std::size_t count() const {
    return hit_ns.size() + lfb_ns.size() + miss_ns.size();
  }
};

/// Groups attributed samples into bracket arrays, converting cycle latencies
/// to nanoseconds once. With `rank` set, only that rank's samples
/// contribute.
BracketLatencies bracket_latencies(std::span<const AttributedSample> attributed,
                                   std::span<const LoadSample> samples,
                                   const ModelParams& p,
                                   std::optional<std::int32_t> rank = {});

/// Hockney sum over the traces: mpi_lat + buf_bytes / mpi_bw each.
double transfer_mpi(std::span<const MpiRecvRecord> traces,
                    const ModelParams& p);

/// Two atomic notifications per exchange; buffer sizes do not appear.
double transfer_cxl(std::size_t trace_count, const ModelParams& p);
double transfer_cxl(std::span<const MpiRecvRecord> traces,
                    const ModelParams& p);

/// One category's share of the MPI-scenario access cost: the plain latency
/// sum scaled by sampling_rate over the category's parallelism factor.
double access_mpi_category(const BracketLatencies& b, Category c,
                           const ModelParams& p);

/// Weighted MPI-scenario access cost over all five categories
/// (subsequent-load weight set).
double access_mpi(const BracketLatencies& b, const Weights& subsequent,
                  const ModelParams& p);

/// One category's CXL-scenario access cost over recorded brackets. With
/// penalty = cxl_lat - mem_lat, the bracket prices are:
///
///   category   demand hit   prefetch hit       LFB                    miss
///   MLAT       lat          lat                lat + penalty          cxl_lat
///   MBW        lat          lat + penalty      max(cxl, lat+penalty)  max(cxl, lat+penalty)
///   CBW        lat          lat + penalty      lat                    max(cxl, lat+penalty)
///   CLAT       lat          lat                lat                    cxl_lat
///   Compute    lat          lat                lat + penalty/2        cxl_lat
///
/// Cache-hit mass splits demand/prefetch per `split`. Each result is scaled
/// by sampling_rate / lpf(category).
double access_cxl_category(const BracketLatencies& b, const DemandSplit& split,
                           Category c, const ModelParams& p);

/// One category's first-access cost: every sample is priced with that
/// category's miss bracket, since the first load after a sender write
/// necessarily reads the pooled device.
double first_access_category(const BracketLatencies& b, Category c,
                             const ModelParams& p);

/// Full CXL-scenario access cost. Fraction 1/n of every sample is a first
/// access, priced as a miss and weighted with the first-load set over
/// {MBW, MLAT, Compute}; the remaining (n-1)/n keeps its recorded bracket
/// under the subsequent-load set. With `unpack`, only the 1/n unpack pass
/// touches the pool and the remainder is priced at its recorded latency
/// (DDR residency after the copy), still divided by the category lpf.
double access_cxl(const BracketLatencies& b, const DemandSplit& split,
                  double n, const Weights& subsequent,
                  const Weights& first_load, const ModelParams& p,
                  bool unpack);

}  // namespace cxlpredict
