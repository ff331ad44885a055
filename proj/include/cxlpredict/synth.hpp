// Copyright 2026 The cxlpredict Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cxlpredict/ingest.hpp"
#include "cxlpredict/report.hpp"

namespace cxlpredict {

/// Hit/LFB/miss proportions of a generated sample population; must sum to 1.
struct BracketMix {
  double hit = 0.0;
  double lfb = 0.0;
  double miss = 0.0;
};

/// Bounded uniform latency draw, integer nanoseconds (keeps hand-computed
/// expectations exact).
struct LatencyRange {
  std::int64_t lo_ns = 1;
  std::int64_t hi_ns = 1;
};

struct CallSiteSpec {
  std::string call_site;
  std::int32_t rank = 0;
  std::int32_t src_rank = 0;
  std::size_t trace_count = 1;
  std::uint64_t buf_bytes = 64;
  std::size_t samples_per_trace = 0;
  std::uint32_t bytes_read = 8;
  BracketMix mix;
  LatencyRange lat_hit{4, 40};
  LatencyRange lat_lfb{40, 90};
  LatencyRange lat_miss{80, 200};
};

/// Counter targets for one rank: the raw metric values the characterization
/// should recover, plus the scales they are realized at.
struct RankSpec {
  std::int32_t rank = 0;
  std::int32_t socket = 0;
  std::uint64_t ld_ins = 1'000'000'000;
  std::int64_t wall_time_ns = 1'000'000'000;
  double val_mbw = 0.0;
  double val_mlat = 0.0;
  double val_clat = 0.0;
};

struct WorkloadSpec {
  ModelParams params;
  std::vector<RankSpec> ranks;
  std::vector<CallSiteSpec> call_sites;
};

WorkloadSpec parse_workload_spec(const std::string& text);
WorkloadSpec load_workload_spec(const std::filesystem::path& path);

/// Deterministic bundle for a fixed seed. Bracket counts are apportioned
/// exactly (largest remainder), so the realized mix is within 1/total of the
/// spec. Throws on infeasible specs.
TraceBundle gen_workload(const WorkloadSpec& spec, std::uint64_t seed);

/// Emits samples.csv, mpi_traces.csv, counters.json, and params.json in the
/// ingest formats; parsing them back yields an equal bundle.
void write_bundle(const TraceBundle& bundle, const std::filesystem::path& dir);

/// Independent reference: every cost is accumulated sample by sample with
/// the per-category bracket formula applied literally, no bracket grouping
/// or shared aggregation with the production path. Used to cross-check the
/// kernel-based pipeline.
std::vector<CallPrediction> oracle_predict(const TraceBundle& bundle,
                                           const PredictOptions& options);

}  // namespace cxlpredict
