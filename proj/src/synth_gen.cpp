// Copyright 2026 The cxlpredict Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cxlpredict/format.hpp"
#include "cxlpredict/synth.hpp"

namespace cxlpredict {

namespace {

constexpr std::uint64_t kBaseAddress = 0x100000000ULL;
constexpr std::uint64_t kAddressStride = 0x10000000ULL;
constexpr std::int64_t kTransferNs = 1000;
constexpr std::int64_t kWindowNs = 1'000'000;

// Draws stay deterministic across standard libraries: plain modulo on the
// raw engine output instead of std::uniform_int_distribution.
std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
  return bound == 0 ? 0 : rng() % bound;
}

void validate_spec(const WorkloadSpec& spec) {
  validate_params(spec.params);
  if (spec.ranks.empty()) throw Error("workload: needs at least one rank");
  std::set<std::int32_t> rank_ids;
  for (const auto& r : spec.ranks) {
    if (!rank_ids.insert(r.rank).second) {
      throw Error("workload: duplicate rank " + std::to_string(r.rank));
    }
    if (r.ld_ins == 0) throw Error("workload: ld_ins must be > 0");
    if (r.wall_time_ns <= 0) throw Error("workload: wall_time_ns must be > 0");
    auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
    if (!in_unit(r.val_mbw) || !in_unit(r.val_mlat) || !in_unit(r.val_clat)) {
      throw Error("workload: metric targets must be in [0,1]");
    }
    if (r.val_mlat > r.val_clat) {
      throw Error("workload: val_mlat > val_clat is infeasible (L3 misses "
                  "are a subset of L2 loads)");
    }
  }
  for (const auto& cs : spec.call_sites) {
    if (!rank_ids.contains(cs.rank)) {
      throw Error("workload: call site " + cs.call_site +
                  " references rank without counter targets");
    }
    if (cs.trace_count == 0) throw Error("workload: trace_count must be > 0");
    if (cs.buf_bytes < cs.bytes_read || cs.buf_bytes > kAddressStride) {
      throw Error("workload: buf_bytes out of range for " + cs.call_site);
    }
    double mix_sum = cs.mix.hit + cs.mix.lfb + cs.mix.miss;
    if (cs.mix.hit < 0 || cs.mix.lfb < 0 || cs.mix.miss < 0 ||
        std::abs(mix_sum - 1.0) > 1e-9) {
      throw Error("workload: bracket mix of " + cs.call_site +
                  " must be non-negative and sum to 1");
    }
    for (const LatencyRange& lr : {cs.lat_hit, cs.lat_lfb, cs.lat_miss}) {
      if (lr.lo_ns < 1 || lr.hi_ns < lr.lo_ns) {
        throw Error("workload: latency range of " + cs.call_site +
                    " must satisfy 1 <= lo <= hi");
      }
      if (ns_to_cycles(static_cast<double>(lr.lo_ns), spec.params) < 1.0) {
        throw Error("workload: latency below one cycle in " + cs.call_site);
      }
    }
  }
}

// Exact apportionment of `total` samples over the three brackets.
std::array<std::size_t, 3> apportion(const BracketMix& mix, std::size_t total) {
  std::array<double, 3> want = {mix.hit * static_cast<double>(total),
                                mix.lfb * static_cast<double>(total),
                                mix.miss * static_cast<double>(total)};
  std::array<std::size_t, 3> counts{};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    counts[i] = static_cast<std::size_t>(want[i]);
    assigned += counts[i];
  }
  std::array<int, 3> order = {0, 1, 2};
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    double fa = want[a] - std::floor(want[a]);
    double fb = want[b] - std::floor(want[b]);
    return fa != fb ? fa > fb : a < b;
  });
  for (int i = 0; assigned < total; ++i) {
    counts[order[static_cast<std::size_t>(i % 3)]] += 1;
    ++assigned;
  }
  return counts;
}

}  // namespace

TraceBundle gen_workload(const WorkloadSpec& spec, std::uint64_t seed) {
  validate_spec(spec);
  const ModelParams& p = spec.params;
  std::mt19937_64 rng(seed);

  TraceBundle bundle;
  bundle.params = p;

  for (const auto& r : spec.ranks) {
    RankCounters c;
    c.ld_ins = r.ld_ins;
    c.l1_ldm = static_cast<std::uint64_t>(
        std::llround(r.val_clat * static_cast<double>(r.ld_ins)));
    c.l3_ldm = static_cast<std::uint64_t>(
        std::llround(r.val_mlat * static_cast<double>(r.ld_ins)));
    c.tot_cyc = static_cast<std::uint64_t>(std::llround(
        ns_to_cycles(static_cast<double>(r.wall_time_ns), p)));
    c.wall_time_ns = r.wall_time_ns;
    bundle.counters.ranks[r.rank] = c;
    bundle.counters.rank_socket[r.rank] = r.socket;
    if (!bundle.counters.socket_imc_read_bytes.contains(r.socket)) {
      double bytes = r.val_mbw * p.peak_mem_bw *
                     (static_cast<double>(r.wall_time_ns) * 1e-9);
      bundle.counters.socket_imc_read_bytes[r.socket] =
          static_cast<std::uint64_t>(std::llround(bytes));
    }
  }

  std::size_t site_index = 0;
  for (const auto& cs : spec.call_sites) {
    const std::uint64_t buf_addr = kBaseAddress + site_index * kAddressStride;
    const std::int64_t period = kTransferNs + kWindowNs;

    const std::size_t total = cs.trace_count * cs.samples_per_trace;
    auto counts = apportion(cs.mix, total);
    // 0 = hit, 1 = lfb, 2 = miss
    std::vector<std::uint8_t> labels;
    labels.reserve(total);
    labels.insert(labels.end(), counts[0], 0);
    labels.insert(labels.end(), counts[1], 1);
    labels.insert(labels.end(), counts[2], 2);
    for (std::size_t i = labels.size(); i > 1; --i) {
      std::swap(labels[i - 1], labels[draw(rng, i)]);
    }

    std::size_t hit_rotation = 0;
    std::size_t miss_rotation = 0;
    const std::uint64_t slots = cs.buf_bytes / cs.bytes_read;
    for (std::size_t epoch = 0; epoch < cs.trace_count; ++epoch) {
      MpiRecvRecord rec;
      rec.call_site = cs.call_site;
      rec.rank = cs.rank;
      rec.src_rank = cs.src_rank;
      rec.tag = static_cast<std::int64_t>(site_index);
      rec.comm = "world";
      rec.buf_addr = buf_addr;
      rec.buf_bytes = cs.buf_bytes;
      rec.t_post_ns = static_cast<std::int64_t>(epoch) * period;
      rec.t_complete_ns = rec.t_post_ns + kTransferNs;
      bundle.traces.push_back(rec);

      for (std::size_t j = 0; j < cs.samples_per_trace; ++j) {
        const std::uint8_t label = labels[epoch * cs.samples_per_trace + j];
        LoadSample s;
        s.rank = cs.rank;
        s.core_id = cs.rank;
        s.bytes_read = cs.bytes_read;
        s.code_location = "app.c:" + std::to_string(100 + site_index);
        s.timestamp_ns = rec.t_complete_ns + 1 +
                         static_cast<std::int64_t>(
                             draw(rng, static_cast<std::uint64_t>(kWindowNs - 2)));
        s.address = buf_addr + cs.bytes_read * draw(rng, slots);
        const LatencyRange& lr = label == 0   ? cs.lat_hit
                                 : label == 1 ? cs.lat_lfb
                                              : cs.lat_miss;
        std::int64_t ns = lr.lo_ns + static_cast<std::int64_t>(draw(
                              rng, static_cast<std::uint64_t>(
                                       lr.hi_ns - lr.lo_ns + 1)));
        s.latency_cycles = ns_to_cycles(static_cast<double>(ns), p);
        if (label == 0) {
          constexpr DataSource kHits[] = {DataSource::L1Hit, DataSource::L2Hit,
                                          DataSource::L3Hit};
          s.source = kHits[hit_rotation++ % 3];
        } else if (label == 1) {
          s.source = DataSource::Lfb;
        } else {
          constexpr DataSource kMisses[] = {DataSource::LocalMem,
                                            DataSource::RemoteMem};
          s.source = kMisses[miss_rotation++ % 2];
        }
        bundle.samples.push_back(std::move(s));
      }
    }
    ++site_index;
  }

  return finalize_bundle(std::move(bundle));
}

namespace {

using nlohmann::json;

BracketMix parse_mix(const json& j) {
  BracketMix mix;
  mix.hit = j.value("hit", 0.0);
  mix.lfb = j.value("lfb", 0.0);
  mix.miss = j.value("miss", 0.0);
  return mix;
}

LatencyRange parse_range(const json& j, const char* key,
                         const LatencyRange& fallback) {
  if (!j.contains(key)) return fallback;
  const auto& arr = j.at(key);
  if (!arr.is_array() || arr.size() != 2) {
    throw Error(std::string("workload: lat_ns.") + key +
                " must be [lo, hi]");
  }
  return LatencyRange{arr[0].get<std::int64_t>(), arr[1].get<std::int64_t>()};
}

}  // namespace

WorkloadSpec parse_workload_spec(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("workload: invalid JSON: ") + e.what());
  }
  WorkloadSpec spec;
  if (!j.contains("params")) throw Error("workload: missing params");
  spec.params = parse_params_json(j.at("params").dump());
  for (const auto& r : j.value("ranks", json::array())) {
    RankSpec rs;
    rs.rank = r.at("rank").get<std::int32_t>();
    rs.socket = r.value("socket", 0);
    rs.ld_ins = r.value("ld_ins", std::uint64_t{1'000'000'000});
    rs.wall_time_ns = r.value("wall_time_ns", std::int64_t{1'000'000'000});
    rs.val_mbw = r.value("val_mbw", 0.0);
    rs.val_mlat = r.value("val_mlat", 0.0);
    rs.val_clat = r.value("val_clat", 0.0);
    spec.ranks.push_back(rs);
  }
  for (const auto& c : j.value("call_sites", json::array())) {
    CallSiteSpec cs;
    cs.call_site = c.at("call_site").get<std::string>();
    cs.rank = c.value("rank", 0);
    cs.src_rank = c.value("src_rank", cs.rank + 1);
    cs.trace_count = c.at("trace_count").get<std::size_t>();
    cs.buf_bytes = c.at("buf_bytes").get<std::uint64_t>();
    cs.samples_per_trace = c.at("samples_per_trace").get<std::size_t>();
    cs.bytes_read = c.value("bytes_read", 8u);
    if (!c.contains("mix")) throw Error("workload: call site needs mix");
    cs.mix = parse_mix(c.at("mix"));
    const json lat = c.value("lat_ns", json::object());
    cs.lat_hit = parse_range(lat, "hit", cs.lat_hit);
    cs.lat_lfb = parse_range(lat, "lfb", cs.lat_lfb);
    cs.lat_miss = parse_range(lat, "miss", cs.lat_miss);
    spec.call_sites.push_back(std::move(cs));
  }
  return spec;
}

WorkloadSpec load_workload_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("workload: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_workload_spec(buf.str());
}

void write_bundle(const TraceBundle& bundle,
                  const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "samples.csv", std::ios::binary);
    if (!out) throw Error("write_bundle: cannot write samples.csv");
    out << "timestamp_ns,rank,core_id,data_source,latency_cycles,address,"
           "bytes_read,code_location\n";
    for (const auto& s : bundle.samples) {
      out << s.timestamp_ns << ',' << s.rank << ',' << s.core_id << ','
          << source_token(s.source) << ',' << format_double(s.latency_cycles)
          << ',' << format_hex(s.address) << ',' << s.bytes_read << ','
          << s.code_location << '\n';
    }
  }
  {
    std::ofstream out(dir / "mpi_traces.csv", std::ios::binary);
    if (!out) throw Error("write_bundle: cannot write mpi_traces.csv");
    out << "call_site,rank,src_rank,tag,comm,buf_addr_hex,buf_bytes,"
           "t_post_ns,t_complete_ns\n";
    for (const auto& t : bundle.traces) {
      out << t.call_site << ',' << t.rank << ',' << t.src_rank << ',' << t.tag
          << ',' << t.comm << ',' << format_hex(t.buf_addr) << ','
          << t.buf_bytes << ',' << t.t_post_ns << ',' << t.t_complete_ns
          << '\n';
    }
  }
  {
    nlohmann::ordered_json j;
    j["ranks"] = nlohmann::ordered_json::array();
    for (const auto& [rank, c] : bundle.counters.ranks) {
      j["ranks"].push_back(nlohmann::ordered_json{{"rank", rank},
                                                  {"ld_ins", c.ld_ins},
                                                  {"l1_ldm", c.l1_ldm},
                                                  {"l3_ldm", c.l3_ldm},
                                                  {"tot_cyc", c.tot_cyc},
                                                  {"wall_time_ns",
                                                   c.wall_time_ns}});
    }
    j["sockets"] = nlohmann::ordered_json::array();
    for (const auto& [socket, bytes] : bundle.counters.socket_imc_read_bytes) {
      j["sockets"].push_back(nlohmann::ordered_json{
          {"socket", socket}, {"imc_read_bytes", bytes}});
    }
    j["rank_socket"] = nlohmann::ordered_json::object();
    for (const auto& [rank, socket] : bundle.counters.rank_socket) {
      j["rank_socket"][std::to_string(rank)] = socket;
    }
    std::ofstream out(dir / "counters.json", std::ios::binary);
    if (!out) throw Error("write_bundle: cannot write counters.json");
    out << j.dump(2) << '\n';
  }
  {
    std::ofstream out(dir / "params.json", std::ios::binary);
    if (!out) throw Error("write_bundle: cannot write params.json");
    out << params_to_json(bundle.params);
  }
}

}  // namespace cxlpredict
