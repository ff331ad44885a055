// Copyright 2026 The cxlpredict Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "cxlpredict/params.hpp"
#include "cxlpredict/types.hpp"

namespace cxlpredict {

/// Everything one analysis run consumes: samples, receive traces, counters,
/// and the model parameters. After finalize_bundle the samples are ordered by
/// (rank, timestamp), the traces by (rank, t_post), timestamps start at 0,
/// and every rank that produced samples has counters.
struct TraceBundle {
  std::vector<LoadSample> samples;
  std::vector<MpiRecvRecord> traces;
  CounterSummary counters;
  ModelParams params;

  bool operator==(const TraceBundle&) const = default;
};

struct SampleParseResult {
  std::vector<LoadSample> samples;
  std::size_t malformed_rows = 0;       // skipped, structurally broken
  std::size_t unknown_source_rows = 0;  // retained, flagged
};

/// samples.csv, header
/// `timestamp_ns,rank,core_id,data_source,latency_cycles,address,bytes_read,code_location`.
/// Rows with data_source UNKNOWN are kept but counted; rows with the wrong
/// field count are counted as malformed and skipped.
SampleParseResult parse_samples(const std::filesystem::path& path);

/// mpi_traces.csv, header
/// `call_site,rank,src_rank,tag,comm,buf_addr_hex,buf_bytes,t_post_ns,t_complete_ns`.
std::vector<MpiRecvRecord> parse_mpi_traces(const std::filesystem::path& path);

/// counters.json: `ranks` array, `sockets` array, `rank_socket` map.
CounterSummary parse_counters(const std::filesystem::path& path);

/// Sorts, normalizes timestamps to the bundle minimum, and validates the
/// cross-collection invariants.
TraceBundle finalize_bundle(TraceBundle bundle);

struct BundleStats {
  std::size_t malformed_rows = 0;
  std::size_t unknown_source_rows = 0;
};

TraceBundle load_bundle(const std::filesystem::path& samples_path,
                        const std::filesystem::path& traces_path,
                        const std::filesystem::path& counters_path,
                        const std::filesystem::path& params_path,
                        BundleStats* stats = nullptr);

}  // namespace cxlpredict
