// Copyright 2026 The cxlpredict Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "cxlpredict/characterize.hpp"
#include "cxlpredict/ingest.hpp"
#include "cxlpredict/types.hpp"

namespace cxlpredict {

struct PredictOptions {
  /// NEUTRAL band: |delta| <= epsilon_frac * total_mpi of the call.
  double epsilon_frac = 0.01;
  /// Call sites whose receive target is a slice of a larger array and needs
  /// an unpack copy out of the pool.
  std::set<std::string> unpack_call_sites;
};

struct RankWeights {
  RawMetrics raw;
  Weights subsequent;
  Weights first_load;
};

struct DataQuality {
  std::size_t total_samples = 0;
  std::size_t unknown_source_samples = 0;
  std::size_t attributed_samples = 0;
  std::size_t unmatched_samples = 0;
  std::size_t malformed_rows = 0;
};

struct Report {
  std::vector<CallPrediction> calls;  // rank_calls order
  std::map<std::int32_t, RankWeights> weights;
  DataQuality quality;
  PredictOptions options;
  ModelParams params;
};

/// Runs the full pipeline on a bundle: filters unmodelable samples, matches
/// them to receives, characterizes the ranks that contributed samples, and
/// prices every call site that has at least one trace. Call sites without
/// attributed samples keep zero access terms and are flagged low-confidence.
Report predict(const TraceBundle& bundle, const PredictOptions& options,
               const BundleStats* parse_stats = nullptr);

/// Orders predictions by descending delta (exact ties by call_site) and
/// assigns RECOMMEND / NEUTRAL / KEEP_MPI against the epsilon band.
std::vector<CallPrediction> rank_calls(std::vector<CallPrediction> calls,
                                       double epsilon_frac);

/// Deterministic byte output for a fixed bundle and options.
std::string emit_json(const Report& report);
std::string emit_csv(const Report& report);
/// Plot-ready transfer/access share pairs for both scenarios.
std::string emit_breakdown_csv(const Report& report);

}  // namespace cxlpredict
