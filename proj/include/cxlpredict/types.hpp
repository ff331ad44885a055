// Copyright 2026 The cxlpredict Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

namespace cxlpredict {

/// Input-validation and modeling errors. The message names the offending
/// field, file, or row where one exists.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Hardware element that satisfied a sampled load.
enum class DataSource : std::uint8_t {
  L1Hit,
  L2Hit,
  L3Hit,
  Lfb,       // line fill buffer: load caught mid-fetch, origin unknown
  LocalMem,
  RemoteMem,
  Unknown,
};

/// Cost bracket a sample falls into. The bracket decides which term of the
/// per-category access formulas applies.
enum class Bracket : std::uint8_t { CacheHit, Lfb, CacheMiss };

/// Total mapping DataSource -> Bracket. Unknown is rejected: samples without
/// an attributable source must be filtered out before modeling.
Bracket bracket_of(DataSource s);

std::string_view source_token(DataSource s);
DataSource source_from_token(std::string_view token);

/// Workload categories of the characterization step. Latency-limited
/// categories (Mlat, Clat) divide by lpf_lat, the rest by lpf_bw.
enum class Category : std::uint8_t { Mbw, Mlat, Cbw, Clat, Compute };

inline constexpr std::array<Category, 5> kCategories = {
    Category::Mbw, Category::Mlat, Category::Cbw, Category::Clat,
    Category::Compute};

std::string_view category_name(Category c);

/// One hardware load-event sample.
struct LoadSample {
  std::int64_t timestamp_ns = 0;  // since trace epoch
  std::int32_t rank = 0;
  std::int32_t core_id = 0;
  DataSource source = DataSource::Unknown;
  double latency_cycles = 1.0;
  std::uint64_t address = 0;
  std::uint32_t bytes_read = 8;
  std::string code_location;  // optional "file:line"

  bool operator==(const LoadSample&) const = default;
};

/// One traced MPI receive.
struct MpiRecvRecord {
  std::string call_site;
  std::int32_t rank = 0;
  std::int32_t src_rank = 0;
  std::int64_t tag = 0;
  std::string comm;
  std::uint64_t buf_addr = 0;
  std::uint64_t buf_bytes = 0;
  std::int64_t t_post_ns = 0;
  std::int64_t t_complete_ns = 0;

  std::uint64_t buf_end() const { return buf_addr + buf_bytes; }
  bool contains(std::uint64_t addr) const {
    return addr >= buf_addr && addr < buf_end();
  }
  /// True when the two buffer ranges share at least one byte.
  bool overlaps(const MpiRecvRecord& other) const {
    return buf_addr < other.buf_end() && other.buf_addr < buf_end();
  }

  bool operator==(const MpiRecvRecord&) const = default;
};

struct RankCounters {
  std::uint64_t ld_ins = 0;
  std::uint64_t l1_ldm = 0;
  std::uint64_t l3_ldm = 0;
  std::uint64_t tot_cyc = 0;
  std::int64_t wall_time_ns = 0;

  bool operator==(const RankCounters&) const = default;
};

/// Aggregate PMU counters: core counters per rank, memory-controller read
/// volume per socket, and the rank->socket placement.
struct CounterSummary {
  std::map<std::int32_t, RankCounters> ranks;
  std::map<std::int32_t, std::uint64_t> socket_imc_read_bytes;
  std::map<std::int32_t, std::int32_t> rank_socket;

  std::int32_t socket_of(std::int32_t rank) const;
  std::uint64_t imc_read_bytes_for_rank(std::int32_t rank) const;

  bool operator==(const CounterSummary&) const = default;
};

/// Normalized category weights; components in [0,1], summing to 1.
struct Weights {
  double mbw = 0.0;
  double mlat = 0.0;
  double cbw = 0.0;
  double clat = 0.0;
  double compute = 0.0;

  double sum() const { return mbw + mlat + cbw + clat + compute; }
  double operator[](Category c) const;

  bool operator==(const Weights&) const = default;
};

enum class Advice : std::uint8_t { Recommend, Neutral, KeepMpi };

std::string_view advice_name(Advice a);

/// Per-call-site prediction: MPI vs. CXL transfer/access overheads in
/// nanoseconds, their difference, and breakdown shares.
struct CallPrediction {
  std::string call_site;
  std::size_t trace_count = 0;
  std::size_t attributed_sample_count = 0;

  double t_transfer_mpi = 0.0;
  double t_transfer_cxl = 0.0;
  double t_access_mpi = 0.0;
  double t_access_cxl = 0.0;
  double total_mpi = 0.0;  // t_transfer_mpi + t_access_mpi
  double total_cxl = 0.0;  // t_transfer_cxl + t_access_cxl
  double delta = 0.0;      // total_mpi - total_cxl; > 0 favors CXL
  double speedup = 0.0;    // total_mpi / total_cxl when total_cxl > 0

  double transfer_share_mpi = 0.0;
  double transfer_share_cxl = 0.0;

  double n_loads_per_element = 1.0;
  double demand_frac = 1.0;

  bool low_confidence = false;  // traces but no attributed samples
  bool unpack = false;
  Advice advice = Advice::Neutral;
};

}  // namespace cxlpredict
