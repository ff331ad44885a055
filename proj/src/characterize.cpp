// Copyright 2026 The cxlpredict Authors
// SPDX-License-Identifier: Apache-2.0

#include "cxlpredict/characterize.hpp"

#include <algorithm>
#include <vector>

namespace cxlpredict {

double weight(double val, const ThresholdPair& thr) {
  if (val <= thr.lower) return 0.0;
  if (val >= thr.upper) return 1.0;
  double t = (val - thr.lower) / (thr.upper - thr.lower);
  return t * t;
}

double mean_bytes_read_for_rank(std::span<const LoadSample> samples,
                                std::int32_t rank) {
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& s : samples) {
    if (s.rank != rank || s.source == DataSource::Unknown) continue;
    total += s.bytes_read;
    ++count;
  }
  return count == 0 ? 8.0 : total / static_cast<double>(count);
}

RawMetrics metrics(const CounterSummary& counters, const ModelParams& p,
                   std::int32_t rank, double avg_load_width) {
  auto it = counters.ranks.find(rank);
  if (it == counters.ranks.end()) {
    throw Error("metrics: rank " + std::to_string(rank) + " not in counters");
  }
  const RankCounters& c = it->second;
  if (c.ld_ins == 0) {
    throw Error("metrics: no load activity for rank " + std::to_string(rank));
  }
  const double wall_ns = static_cast<double>(c.wall_time_ns);
  const double ld_ins = static_cast<double>(c.ld_ins);
  const double imc = static_cast<double>(counters.imc_read_bytes_for_rank(rank));

  RawMetrics m;
  m.val_mbw = (imc / wall_ns) * 1e9 / p.peak_mem_bw;
  m.val_mlat = static_cast<double>(c.l3_ldm) / ld_ins;
  m.val_cbw_l1 = (ld_ins * avg_load_width / wall_ns) * 1e9 / p.peak_l1_bw;
  m.val_cbw_l2 =
      (static_cast<double>(c.l1_ldm) * p.cache_line / wall_ns) * 1e9 /
      p.peak_l2_bw;
  m.val_clat = static_cast<double>(c.l1_ldm) / ld_ins;
  return m;
}

NormalizedSet normalize_weight_set(std::vector<double> non_compute,
                                   double compute, double compute_max_weight) {
  double s = compute;
  for (double w : non_compute) s += w;
  if (s > 1.0) {
    for (double& w : non_compute) w /= s;
    compute /= s;
  } else if (s < 1.0) {
    double cap = std::max(compute, compute_max_weight);
    double new_compute = std::min(compute + (1.0 - s), cap);
    double remainder = 1.0 - (s - compute) - new_compute;
    compute = new_compute;
    if (remainder > 0.0 && !non_compute.empty()) {
      double each = remainder / static_cast<double>(non_compute.size());
      for (double& w : non_compute) w += each;
    }
  }
  return NormalizedSet{std::move(non_compute), compute};
}

Weights compose_weights(const RawMetrics& m, const ModelParams& p) {
  double w_mbw = weight(m.val_mbw, p.thr_mbw);
  double w_mlat = std::max(0.0, weight(m.val_mlat, p.thr_mlat) - w_mbw);
  double w_cbw = std::max(weight(m.val_cbw_l1, p.thr_cbw),
                          weight(m.val_cbw_l2, p.thr_cbw));
  double w_clat = std::max(
      0.0, weight(m.val_clat, p.thr_clat) - (w_mbw + w_mlat + w_cbw));

  NormalizedSet n = normalize_weight_set({w_mbw, w_mlat, w_cbw, w_clat}, 0.0,
                                         p.compute_max_weight);
  Weights w;
  w.mbw = n.non_compute[0];
  w.mlat = n.non_compute[1];
  w.cbw = n.non_compute[2];
  w.clat = n.non_compute[3];
  w.compute = n.compute;
  return w;
}

Weights first_load_weights(const Weights& w, const ModelParams& p) {
  NormalizedSet n = normalize_weight_set({w.mbw, w.mlat}, w.compute,
                                         p.compute_max_weight);
  Weights out;
  out.mbw = n.non_compute[0];
  out.mlat = n.non_compute[1];
  out.cbw = 0.0;
  out.clat = 0.0;
  out.compute = n.compute;
  return out;
}

}  // namespace cxlpredict
