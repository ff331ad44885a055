// Copyright 2026 The cxlpredict Authors
// SPDX-License-Identifier: Apache-2.0

// Reference implementation of the full prediction, kept deliberately
// separate from the production modules: weights, matching, and every cost
// are recomputed here sample by sample, straight from the per-category
// formulas, with no bracket grouping and no shared helpers beyond the domain
// types. A grouping or dispatch bug in the main path cannot reproduce here.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include "cxlpredict/synth.hpp"

namespace cxlpredict {

namespace {

struct OracleWeights {
  // mbw, mlat, cbw, clat, compute
  std::array<double, 5> subsequent{};
  std::array<double, 5> first_load{};
};

double quad_weight(double val, double lo, double hi) {
  if (val <= lo) return 0.0;
  if (val >= hi) return 1.0;
  double t = (val - lo) / (hi - lo);
  return t * t;
}

OracleWeights oracle_weights_for_rank(const TraceBundle& bundle,
                                      std::int32_t rank) {
  const ModelParams& p = bundle.params;
  const RankCounters& c = bundle.counters.ranks.at(rank);
  if (c.ld_ins == 0) {
    throw Error("oracle: no load activity for rank " + std::to_string(rank));
  }

  double width_sum = 0.0;
  std::size_t width_count = 0;
  for (const auto& s : bundle.samples) {
    if (s.rank != rank || s.source == DataSource::Unknown) continue;
    width_sum += s.bytes_read;
    ++width_count;
  }
  double avg_width =
      width_count == 0 ? 8.0 : width_sum / static_cast<double>(width_count);

  double wall_ns = static_cast<double>(c.wall_time_ns);
  double ld_ins = static_cast<double>(c.ld_ins);
  double imc = static_cast<double>(bundle.counters.socket_imc_read_bytes.at(
      bundle.counters.rank_socket.at(rank)));

  double val_mbw = (imc / wall_ns) * 1e9 / p.peak_mem_bw;
  double val_mlat = static_cast<double>(c.l3_ldm) / ld_ins;
  double val_cbw_l1 = (ld_ins * avg_width / wall_ns) * 1e9 / p.peak_l1_bw;
  double val_cbw_l2 =
      (static_cast<double>(c.l1_ldm) * p.cache_line / wall_ns) * 1e9 /
      p.peak_l2_bw;
  double val_clat = static_cast<double>(c.l1_ldm) / ld_ins;

  double w_mbw = quad_weight(val_mbw, p.thr_mbw.lower, p.thr_mbw.upper);
  double w_mlat = std::max(
      0.0, quad_weight(val_mlat, p.thr_mlat.lower, p.thr_mlat.upper) - w_mbw);
  double w_cbw =
      std::max(quad_weight(val_cbw_l1, p.thr_cbw.lower, p.thr_cbw.upper),
               quad_weight(val_cbw_l2, p.thr_cbw.lower, p.thr_cbw.upper));
  double w_clat = std::max(
      0.0, quad_weight(val_clat, p.thr_clat.lower, p.thr_clat.upper) -
               (w_mbw + w_mlat + w_cbw));

  OracleWeights w;
  double s = w_mbw + w_mlat + w_cbw + w_clat;
  double compute = 0.0;
  if (s > 1.0) {
    w_mbw /= s;
    w_mlat /= s;
    w_cbw /= s;
    w_clat /= s;
  } else if (s < 1.0) {
    compute = std::min(1.0 - s, p.compute_max_weight);
    double remainder = 1.0 - s - compute;
    if (remainder > 0.0) {
      double each = remainder / 4.0;
      w_mbw += each;
      w_mlat += each;
      w_cbw += each;
      w_clat += each;
    }
  }
  w.subsequent = {w_mbw, w_mlat, w_cbw, w_clat, compute};

  // First-load set: cache categories dropped, {MBW, MLAT, Compute}
  // renormalized by the same procedure.
  double f_mbw = w_mbw;
  double f_mlat = w_mlat;
  double f_compute = compute;
  double s3 = f_mbw + f_mlat + f_compute;
  if (s3 > 1.0) {
    f_mbw /= s3;
    f_mlat /= s3;
    f_compute /= s3;
  } else if (s3 < 1.0) {
    double cap = std::max(f_compute, p.compute_max_weight);
    double new_compute = std::min(f_compute + (1.0 - s3), cap);
    double remainder = 1.0 - f_mbw - f_mlat - new_compute;
    f_compute = new_compute;
    if (remainder > 0.0) {
      f_mbw += remainder / 2.0;
      f_mlat += remainder / 2.0;
    }
  }
  w.first_load = {f_mbw, f_mlat, 0.0, 0.0, f_compute};
  return w;
}

// 0 = mbw, 1 = mlat, 2 = cbw, 3 = clat, 4 = compute
double oracle_lpf(std::size_t cat, const ModelParams& p) {
  return (cat == 1 || cat == 3) ? p.lpf_lat : p.lpf_bw;
}

enum class OracleBracket { Hit, Lfb, Miss };

OracleBracket oracle_bracket(DataSource s) {
  switch (s) {
    case DataSource::L1Hit:
    case DataSource::L2Hit:
    case DataSource::L3Hit:
      return OracleBracket::Hit;
    case DataSource::Lfb:
      return OracleBracket::Lfb;
    default:
      return OracleBracket::Miss;
  }
}

// Per-sample subsequent-access cost for one category, the bracket formulas
// written out term by term.
double oracle_subsequent_cost(std::size_t cat, OracleBracket bracket,
                              double lat, double demand, double prefetch,
                              const ModelParams& p) {
  const double pen = p.cxl_lat - p.mem_lat;
  switch (cat) {
    case 0:  // memory bandwidth
      if (bracket == OracleBracket::Hit) {
        return demand * lat + prefetch * (lat + pen);
      }
      return std::max(p.cxl_lat, lat + pen);
    case 1:  // memory latency
      if (bracket == OracleBracket::Hit) return lat;
      if (bracket == OracleBracket::Lfb) return lat + pen;
      return p.cxl_lat;
    case 2:  // cache bandwidth
      if (bracket == OracleBracket::Hit) {
        return demand * lat + prefetch * (lat + pen);
      }
      if (bracket == OracleBracket::Lfb) return lat;
      return std::max(p.cxl_lat, lat + pen);
    case 3:  // cache latency
      if (bracket == OracleBracket::Miss) return p.cxl_lat;
      return lat;
    default:  // compute
      if (bracket == OracleBracket::Hit) return lat;
      if (bracket == OracleBracket::Lfb) return lat + pen / 2.0;
      return p.cxl_lat;
  }
}

double oracle_first_cost(std::size_t cat, double lat, const ModelParams& p) {
  if (cat == 0 || cat == 2) {
    return std::max(p.cxl_lat, lat + (p.cxl_lat - p.mem_lat));
  }
  return p.cxl_lat;
}

}  // namespace

std::vector<CallPrediction> oracle_predict(const TraceBundle& bundle,
                                           const PredictOptions& options) {
  const ModelParams& p = bundle.params;
  const auto& traces = bundle.traces;

  // Epoch-window ends, brute force over all overlapping pairs.
  std::vector<std::int64_t> window_end(
      traces.size(), std::numeric_limits<std::int64_t>::max());
  for (std::size_t i = 0; i < traces.size(); ++i) {
    for (std::size_t j = 0; j < traces.size(); ++j) {
      if (i == j) continue;
      if (traces[i].rank != traces[j].rank) continue;
      if (!traces[i].overlaps(traces[j])) continue;
      if (traces[j].t_post_ns >= traces[i].t_complete_ns) {
        window_end[i] = std::min(window_end[i], traces[j].t_post_ns);
      }
    }
  }

  // Match each modelable sample by scanning every trace.
  struct Matched {
    std::size_t sample;
    std::size_t trace;
  };
  std::map<std::string, std::vector<Matched>> matched_by_site;
  for (std::size_t si = 0; si < bundle.samples.size(); ++si) {
    const LoadSample& s = bundle.samples[si];
    if (s.source == DataSource::Unknown) continue;
    std::ptrdiff_t best = -1;
    for (std::size_t ti = 0; ti < traces.size(); ++ti) {
      const MpiRecvRecord& t = traces[ti];
      if (t.rank != s.rank) continue;
      if (!t.contains(s.address)) continue;
      if (s.timestamp_ns < t.t_complete_ns) continue;
      if (s.timestamp_ns >= window_end[ti]) continue;
      if (best < 0) {
        best = static_cast<std::ptrdiff_t>(ti);
        continue;
      }
      const MpiRecvRecord& b = traces[static_cast<std::size_t>(best)];
      auto key_t = std::make_tuple(t.t_complete_ns, t.t_post_ns, ti);
      auto key_b = std::make_tuple(b.t_complete_ns, b.t_post_ns,
                                   static_cast<std::size_t>(best));
      if (key_b < key_t) best = static_cast<std::ptrdiff_t>(ti);
    }
    if (best >= 0) {
      matched_by_site[traces[static_cast<std::size_t>(best)].call_site]
          .push_back(Matched{si, static_cast<std::size_t>(best)});
    }
  }

  std::map<std::int32_t, OracleWeights> weights;
  auto weights_for = [&](std::int32_t rank) -> const OracleWeights& {
    auto it = weights.find(rank);
    if (it == weights.end()) {
      it = weights.emplace(rank, oracle_weights_for_rank(bundle, rank)).first;
    }
    return it->second;
  };

  std::map<std::string, std::vector<std::size_t>> site_traces;
  for (std::size_t ti = 0; ti < traces.size(); ++ti) {
    site_traces[traces[ti].call_site].push_back(ti);
  }

  std::vector<CallPrediction> result;
  for (const auto& [call_site, trace_idxs] : site_traces) {
    CallPrediction cp;
    cp.call_site = call_site;
    cp.trace_count = trace_idxs.size();
    cp.unpack = options.unpack_call_sites.contains(call_site);

    std::uint64_t total_bytes = 0;
    for (std::size_t ti : trace_idxs) {
      cp.t_transfer_mpi +=
          p.mpi_lat + static_cast<double>(traces[ti].buf_bytes) / p.mpi_bw * 1e9;
      cp.t_transfer_cxl += 2.0 * p.cxl_atomic_lat;
      total_bytes += traces[ti].buf_bytes;
    }

    auto matched_it = matched_by_site.find(call_site);
    if (matched_it == matched_by_site.end()) {
      cp.low_confidence = true;
    } else {
      const auto& matched = matched_it->second;
      cp.attributed_sample_count = matched.size();

      double width_sum = 0.0;
      std::size_t hits = 0;
      for (const Matched& m : matched) {
        const LoadSample& s = bundle.samples[m.sample];
        width_sum += s.bytes_read;
        if (oracle_bracket(s.source) == OracleBracket::Hit) ++hits;
      }
      double mean_width = width_sum / static_cast<double>(matched.size());
      double hit_share =
          static_cast<double>(hits) / static_cast<double>(matched.size());
      double n = std::max(1.0, static_cast<double>(matched.size()) *
                                   p.sampling_rate * mean_width /
                                   static_cast<double>(total_bytes));
      double loads_per_line = std::max(1.0, p.cache_line / mean_width);
      double prefetch = std::min(1.0 / loads_per_line, hit_share);
      double demand = 1.0 - prefetch;
      cp.n_loads_per_element = n;
      cp.demand_frac = demand;

      const double first_frac = 1.0 / n;
      const double sub_frac = 1.0 - first_frac;
      for (const Matched& m : matched) {
        const LoadSample& s = bundle.samples[m.sample];
        const OracleWeights& w = weights_for(s.rank);
        const double lat = s.latency_cycles * 1e9 / p.cpu_freq;
        const OracleBracket bracket = oracle_bracket(s.source);
        for (std::size_t cat = 0; cat < 5; ++cat) {
          const double scale = p.sampling_rate / oracle_lpf(cat, p);
          cp.t_access_mpi += w.subsequent[cat] * lat * scale;
          cp.t_access_cxl += first_frac * w.first_load[cat] *
                             oracle_first_cost(cat, lat, p) * scale;
          if (sub_frac > 0.0) {
            double sub_cost =
                cp.unpack ? lat
                          : oracle_subsequent_cost(cat, bracket, lat, demand,
                                                   prefetch, p);
            cp.t_access_cxl += sub_frac * w.subsequent[cat] * sub_cost * scale;
          }
        }
      }
    }

    cp.total_mpi = cp.t_transfer_mpi + cp.t_access_mpi;
    cp.total_cxl = cp.t_transfer_cxl + cp.t_access_cxl;
    cp.delta = cp.total_mpi - cp.total_cxl;
    cp.speedup = cp.total_cxl > 0.0 ? cp.total_mpi / cp.total_cxl : 0.0;
    cp.transfer_share_mpi =
        cp.total_mpi > 0.0 ? cp.t_transfer_mpi / cp.total_mpi : 0.0;
    cp.transfer_share_cxl =
        cp.total_cxl > 0.0 ? cp.t_transfer_cxl / cp.total_cxl : 0.0;
    double epsilon = options.epsilon_frac * cp.total_mpi;
    cp.advice = std::abs(cp.delta) <= epsilon
                    ? Advice::Neutral
                    : (cp.delta > 0.0 ? Advice::Recommend : Advice::KeepMpi);
    result.push_back(std::move(cp));
  }
  return result;
}

}  // namespace cxlpredict
