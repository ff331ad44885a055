// Copyright 2026 The cxlpredict Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cxlpredict/params.hpp"
#include "cxlpredict/types.hpp"

namespace cxlpredict {

/// One sample paired with the receive whose buffer and epoch it landed in.
/// Indices refer into the sample/trace vectors the matcher was given.
struct AttributedSample {
  std::size_t sample_index = 0;
  std::size_t trace_index = 0;
  std::int32_t epoch_index = 0;  // which receive into this buffer came before
};

struct MatchResult {
  std::vector<AttributedSample> attributed;
  std::size_t unmatched = 0;
};

/// Pairs samples with receive records. A sample matches a record when the
/// rank agrees, the address lies in the record's buffer range, and the
/// timestamp falls in [t_complete, t_post of the next receive into an
/// overlapping range by the same rank). Among simultaneously valid records
/// the one with the latest t_complete wins. Each sample matches at most one
/// record; the rest are counted as unmatched.
MatchResult match_samples(std::span<const LoadSample> samples,
                          std::span<const MpiRecvRecord> traces);

/// Average loads per received element:
///   n = max(1, samples * sampling_rate * mean_bytes_read / received_bytes)
/// Throws when received_bytes is zero.
double loads_per_element(std::size_t attributed_count, double sampling_rate,
                         double mean_bytes_read,
                         std::uint64_t total_received_bytes);

/// Demand/prefetch split of cache-hit samples. With m = cache_line /
/// mean_bytes_read loads per line, one load per line is not a demand hit, so
/// prefetch = 1/m — clamped to the observed cache-hit share when hits are
/// rarer than line fetches. demand + prefetch = 1 always.
struct DemandSplit {
  double demand = 1.0;
  double prefetch = 0.0;
};
DemandSplit demand_fraction(const ModelParams& p, double mean_bytes_read,
                            double hit_share);

/// Per-call-site sample statistics feeding the access models. n and the
/// demand split pool every epoch and rank of the call site.
struct CallSiteStats {
  std::string call_site;
  std::vector<AttributedSample> samples;
  double n = 1.0;           // loads per element, >= 1
  double first_frac = 1.0;  // 1/n
  DemandSplit split;
  std::size_t total_traces = 0;
  std::uint64_t total_buf_bytes = 0;
  double mean_bytes_read = 0.0;
  double hit_share = 0.0;
};

std::map<std::string, CallSiteStats> build_call_site_stats(
    const MatchResult& match, std::span<const LoadSample> samples,
    std::span<const MpiRecvRecord> traces, const ModelParams& p);

/// Diagnostic CSV: call_site,epoch,timestamp_ns,address,source,latency_cycles.
void dump_attribution_csv(std::ostream& out, const MatchResult& match,
                          std::span<const LoadSample> samples,
                          std::span<const MpiRecvRecord> traces);

}  // namespace cxlpredict
