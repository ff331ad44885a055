// Copyright 2026 The cxlpredict Authors
// SPDX-License-Identifier: Apache-2.0

#include "cxlpredict/overhead.hpp"

#include "cxlpredict/kernels.hpp"

namespace cxlpredict {

namespace ker = kernels;

BracketLatencies bracket_latencies(std::span<const AttributedSample> attributed,
                                   std::span<const LoadSample> samples,
                                   const ModelParams& p,
                                   std::optional<std::int32_t> rank) {
  BracketLatencies b;
  for (const auto& a : attributed) {
    const LoadSample& s = samples[a.sample_index];
    if (rank && s.rank != *rank) continue;
    double ns = cycles_to_ns(s.latency_cycles, p);
    switch (bracket_of(s.source)) {
      case Bracket::CacheHit: b.hit_ns.push_back(ns); break;
      case Bracket::Lfb: b.lfb_ns.push_back(ns); break;
      case Bracket::CacheMiss: b.miss_ns.push_back(ns); break;
    }
  }
  return b;
}

double transfer_mpi(std::span<const MpiRecvRecord> traces,
                    const ModelParams& p) {
  double total = 0.0;
  for (const auto& t : traces) {
    total += p.mpi_lat + static_cast<double>(t.buf_bytes) / p.mpi_bw * 1e9;
  }
  return total;
}

double transfer_cxl(std::size_t trace_count, const ModelParams& p) {
  return 2.0 * p.cxl_atomic_lat * static_cast<double>(trace_count);
}

double transfer_cxl(std::span<const MpiRecvRecord> traces,
                    const ModelParams& p) {
  return transfer_cxl(traces.size(), p);
}

double access_mpi_category(const BracketLatencies& b, Category c,
                           const ModelParams& p) {
  double lat_total =
      ker::sum(b.hit_ns) + ker::sum(b.lfb_ns) + ker::sum(b.miss_ns);
  return lat_total * p.sampling_rate / lpf_for(c, p);
}

double access_mpi(const BracketLatencies& b, const Weights& subsequent,
                  const ModelParams& p) {
  double total = 0.0;
  for (Category c : kCategories) {
    if (subsequent[c] == 0.0) continue;
    total += subsequent[c] * access_mpi_category(b, c, p);
  }
  return total;
}

double access_cxl_category(const BracketLatencies& b, const DemandSplit& split,
                           Category c, const ModelParams& p) {
  const double penalty = p.cxl_lat - p.mem_lat;
  const double miss_count = static_cast<double>(b.miss_ns.size());

  // Cache-hit mass: categories sensitive to bandwidth pressure penalize the
  // prefetched share, the rest treat every hit alike.
  double hit_cost;
  switch (c) {
    case Category::Mbw:
    case Category::Cbw:
      hit_cost = split.demand * ker::sum(b.hit_ns) +
                 split.prefetch * ker::sum_shifted(b.hit_ns, penalty);
      break;
    default:
      hit_cost = ker::sum(b.hit_ns);
      break;
  }

  double lfb_cost = 0.0;
  double miss_cost = 0.0;
  switch (c) {
    case Category::Mlat:
      lfb_cost = ker::sum_shifted(b.lfb_ns, penalty);
      miss_cost = miss_count * p.cxl_lat;
      break;
    case Category::Mbw:
      lfb_cost = ker::sum_max_shifted(b.lfb_ns, p.cxl_lat, penalty);
      miss_cost = ker::sum_max_shifted(b.miss_ns, p.cxl_lat, penalty);
      break;
    case Category::Cbw:
      lfb_cost = ker::sum(b.lfb_ns);
      miss_cost = ker::sum_max_shifted(b.miss_ns, p.cxl_lat, penalty);
      break;
    case Category::Clat:
      lfb_cost = ker::sum(b.lfb_ns);
      miss_cost = miss_count * p.cxl_lat;
      break;
    case Category::Compute:
      lfb_cost = ker::sum_shifted(b.lfb_ns, penalty / 2.0);
      miss_cost = miss_count * p.cxl_lat;
      break;
  }

  return (hit_cost + lfb_cost + miss_cost) * p.sampling_rate / lpf_for(c, p);
}

double first_access_category(const BracketLatencies& b, Category c,
                             const ModelParams& p) {
  const double penalty = p.cxl_lat - p.mem_lat;
  double cost;
  switch (c) {
    case Category::Mbw:
    case Category::Cbw:
      cost = ker::sum_max_shifted(b.hit_ns, p.cxl_lat, penalty) +
             ker::sum_max_shifted(b.lfb_ns, p.cxl_lat, penalty) +
             ker::sum_max_shifted(b.miss_ns, p.cxl_lat, penalty);
      break;
    default:
      cost = static_cast<double>(b.count()) * p.cxl_lat;
      break;
  }
  return cost * p.sampling_rate / lpf_for(c, p);
}

double access_cxl(const BracketLatencies& b, const DemandSplit& split,
                  double n, const Weights& subsequent,
                  const Weights& first_load, const ModelParams& p,
                  bool unpack) {
  const double first_frac = 1.0 / n;
  const double subsequent_frac = 1.0 - first_frac;

  double first_part = 0.0;
  for (Category c : kCategories) {
    if (first_load[c] == 0.0) continue;
    first_part += first_load[c] * first_access_category(b, c, p);
  }
  first_part *= first_frac;

  double subsequent_part = 0.0;
  if (subsequent_frac > 0.0) {
    for (Category c : kCategories) {
      if (subsequent[c] == 0.0) continue;
      double category_cost = unpack ? access_mpi_category(b, c, p)
                                    : access_cxl_category(b, split, c, p);
      subsequent_part += subsequent[c] * category_cost;
    }
    subsequent_part *= subsequent_frac;
  }

  return first_part + subsequent_part;
}

}  // namespace cxlpredict
