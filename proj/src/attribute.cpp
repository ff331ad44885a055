// Copyright 2026 The cxlpredict Authors
// SPDX-License-Identifier: Apache-2.0

#include "cxlpredict/attribute.hpp"

#include <algorithm>
#include <limits>
#include <tuple>

#include "cxlpredict/format.hpp"

namespace cxlpredict {

namespace {

constexpr std::int64_t kNoEnd = std::numeric_limits<std::int64_t>::max();

// Preference order when several records are simultaneously valid for a
// sample: latest completion wins, then latest post, then input order.
std::tuple<std::int64_t, std::int64_t, std::size_t> match_key(
    const MpiRecvRecord& r, std::size_t idx) {
  return {r.t_complete_ns, r.t_post_ns, idx};
}

struct RankIndex {
  // Trace indices sorted by buf_addr, plus a running max of buf_end so the
  // leftward scan for containing ranges can stop early.
  std::vector<std::size_t> by_addr;
  std::vector<std::uint64_t> prefix_max_end;
};

}  // namespace

MatchResult match_samples(std::span<const LoadSample> samples,
                          std::span<const MpiRecvRecord> traces) {
  // Window end: the next receive posted into an overlapping range by the
  // same rank closes the epoch; until then it stays open.
  std::vector<std::int64_t> window_end(traces.size(), kNoEnd);
  std::vector<std::int32_t> epoch_index(traces.size(), 0);
  for (std::size_t i = 0; i < traces.size(); ++i) {
    for (std::size_t j = 0; j < traces.size(); ++j) {
      if (i == j) continue;
      const MpiRecvRecord& a = traces[i];
      const MpiRecvRecord& b = traces[j];
      if (a.rank != b.rank || !a.overlaps(b)) continue;
      if (b.t_post_ns >= a.t_complete_ns) {
        window_end[i] = std::min(window_end[i], b.t_post_ns);
      }
      if (a.call_site == b.call_site &&
          match_key(b, j) < match_key(a, i)) {
        ++epoch_index[i];
      }
    }
  }

  std::map<std::int32_t, RankIndex> per_rank;
  std::map<std::int32_t, std::vector<std::size_t>> rank_traces;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    rank_traces[traces[i].rank].push_back(i);
  }
  for (auto& [rank, idxs] : rank_traces) {
    std::sort(idxs.begin(), idxs.end(), [&](std::size_t a, std::size_t b) {
      return traces[a].buf_addr != traces[b].buf_addr
                 ? traces[a].buf_addr < traces[b].buf_addr
                 : a < b;
    });
    RankIndex index;
    index.by_addr = idxs;
    index.prefix_max_end.resize(idxs.size());
    std::uint64_t running = 0;
    for (std::size_t k = 0; k < idxs.size(); ++k) {
      running = std::max(running, traces[idxs[k]].buf_end());
      index.prefix_max_end[k] = running;
    }
    per_rank.emplace(rank, std::move(index));
  }

  MatchResult result;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const LoadSample& sample = samples[s];
    auto rank_it = per_rank.find(sample.rank);
    bool matched = false;
    if (rank_it != per_rank.end()) {
      const RankIndex& index = rank_it->second;
      // First entry with buf_addr > address; everything to the left may
      // still contain the address.
      auto pos = std::upper_bound(
          index.by_addr.begin(), index.by_addr.end(), sample.address,
          [&](std::uint64_t addr, std::size_t t) {
            return addr < traces[t].buf_addr;
          });
      std::size_t best = 0;
      bool have_best = false;
      for (auto k = static_cast<std::ptrdiff_t>(pos - index.by_addr.begin()) - 1;
           k >= 0; --k) {
        if (index.prefix_max_end[static_cast<std::size_t>(k)] <=
            sample.address) {
          break;  // nothing further left reaches this address
        }
        std::size_t t = index.by_addr[static_cast<std::size_t>(k)];
        const MpiRecvRecord& r = traces[t];
        if (!r.contains(sample.address)) continue;
        if (sample.timestamp_ns < r.t_complete_ns) continue;
        if (sample.timestamp_ns >= window_end[t]) continue;
        if (!have_best || match_key(traces[best], best) < match_key(r, t)) {
          best = t;
          have_best = true;
        }
      }
      if (have_best) {
        result.attributed.push_back(
            AttributedSample{s, best, epoch_index[best]});
        matched = true;
      }
    }
    if (!matched) ++result.unmatched;
  }
  return result;
}

double loads_per_element(std::size_t attributed_count, double sampling_rate,
                         double mean_bytes_read,
                         std::uint64_t total_received_bytes) {
  if (attributed_count == 0) {
    throw Error("loads_per_element: no attributed samples");
  }
  if (total_received_bytes == 0) {
    throw Error("loads_per_element: total received bytes is zero");
  }
  double sampled_bytes = static_cast<double>(attributed_count) *
                         sampling_rate * mean_bytes_read;
  return std::max(1.0, sampled_bytes /
                           static_cast<double>(total_received_bytes));
}

DemandSplit demand_fraction(const ModelParams& p, double mean_bytes_read,
                            double hit_share) {
  if (!(mean_bytes_read > 0.0)) {
    throw Error("demand_fraction: mean_bytes_read must be > 0");
  }
  double loads_per_line = std::max(1.0, p.cache_line / mean_bytes_read);
  double share = std::clamp(hit_share, 0.0, 1.0);
  DemandSplit split;
  split.prefetch = std::min(1.0 / loads_per_line, share);
  split.demand = 1.0 - split.prefetch;
  return split;
}

std::map<std::string, CallSiteStats> build_call_site_stats(
    const MatchResult& match, std::span<const LoadSample> samples,
    std::span<const MpiRecvRecord> traces, const ModelParams& p) {
  std::map<std::string, CallSiteStats> stats;
  for (const auto& a : match.attributed) {
    CallSiteStats& cs = stats[traces[a.trace_index].call_site];
    cs.samples.push_back(a);
  }
  for (const auto& t : traces) {
    auto it = stats.find(t.call_site);
    if (it == stats.end()) continue;
    it->second.total_traces += 1;
    it->second.total_buf_bytes += t.buf_bytes;
  }
  for (auto& [call_site, cs] : stats) {
    cs.call_site = call_site;
    double width_total = 0.0;
    std::size_t hits = 0;
    for (const auto& a : cs.samples) {
      const LoadSample& s = samples[a.sample_index];
      width_total += s.bytes_read;
      if (bracket_of(s.source) == Bracket::CacheHit) ++hits;
    }
    cs.mean_bytes_read = width_total / static_cast<double>(cs.samples.size());
    cs.hit_share =
        static_cast<double>(hits) / static_cast<double>(cs.samples.size());
    cs.n = loads_per_element(cs.samples.size(), p.sampling_rate,
                             cs.mean_bytes_read, cs.total_buf_bytes);
    cs.first_frac = 1.0 / cs.n;
    cs.split = demand_fraction(p, cs.mean_bytes_read, cs.hit_share);
  }
  return stats;
}

void dump_attribution_csv(std::ostream& out, const MatchResult& match,
                          std::span<const LoadSample> samples,
                          std::span<const MpiRecvRecord> traces) {
  out << "call_site,epoch,timestamp_ns,address,source,latency_cycles\n";
  for (const auto& a : match.attributed) {
    const LoadSample& s = samples[a.sample_index];
    out << traces[a.trace_index].call_site << ',' << a.epoch_index << ','
        << s.timestamp_ns << ',' << format_hex(s.address) << ','
        << source_token(s.source) << ',' << format_double(s.latency_cycles)
        << '\n';
  }
}

}  // namespace cxlpredict
