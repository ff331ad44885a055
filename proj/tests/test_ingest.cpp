// Copyright 2026 The cxlpredict Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "cxlpredict/ingest.hpp"
#include "test_util.hpp"

using namespace cxlpredict;

namespace {

const char* kSampleHeader =
    "timestamp_ns,rank,core_id,data_source,latency_cycles,address,bytes_read,"
    "code_location\n";
const char* kTraceHeader =
    "call_site,rank,src_rank,tag,comm,buf_addr_hex,buf_bytes,t_post_ns,"
    "t_complete_ns\n";

std::string minimal_counters_json() {
  return R"({
    "ranks": [
      {"rank": 0, "ld_ins": 1000000000, "l1_ldm": 10000000,
       "l3_ldm": 1000000, "tot_cyc": 2000000000, "wall_time_ns": 1000000000}
    ],
    "sockets": [{"socket": 0, "imc_read_bytes": 36500000000}],
    "rank_socket": {"0": 0}
  })";
}

}  // namespace

TEST_CASE("parse_samples maps fields directly") {
  testutil::TempDir dir;
  auto path = dir.write("samples.csv",
                        std::string(kSampleHeader) +
                            "1000,0,3,L3,120,0x7f00a0,8,foo.c:42\n");
  SampleParseResult r = parse_samples(path);
  REQUIRE(r.samples.size() == 1);
  const LoadSample& s = r.samples[0];
  CHECK(s.timestamp_ns == 1000);
  CHECK(s.rank == 0);
  CHECK(s.core_id == 3);
  CHECK(s.source == DataSource::L3Hit);
  CHECK(s.latency_cycles == 120.0);
  CHECK(s.address == 0x7f00a0);
  CHECK(s.bytes_read == 8);
  CHECK(s.code_location == "foo.c:42");
  CHECK(r.malformed_rows == 0);
  CHECK(r.unknown_source_rows == 0);
}

TEST_CASE("parse_samples empty file with header") {
  testutil::TempDir dir;
  auto path = dir.write("samples.csv", kSampleHeader);
  SampleParseResult r = parse_samples(path);
  CHECK(r.samples.empty());
}

TEST_CASE("parse_samples source aliases") {
  testutil::TempDir dir;
  auto path = dir.write("samples.csv",
                        std::string(kSampleHeader) +
                            "1,0,0,MEM,50,0x1000,8,\n"
                            "2,0,0,REMOTE_MEM,90,0x1008,8,\n"
                            "3,0,0,UNKNOWN,10,0x1010,8,\n");
  SampleParseResult r = parse_samples(path);
  REQUIRE(r.samples.size() == 3);
  CHECK(r.samples[0].source == DataSource::LocalMem);
  CHECK(r.samples[1].source == DataSource::RemoteMem);
  CHECK(r.samples[2].source == DataSource::Unknown);
  CHECK(r.unknown_source_rows == 1);  // retained but flagged
}

TEST_CASE("parse_samples counts malformed rows and keeps going") {
  testutil::TempDir dir;
  auto path = dir.write("samples.csv",
                        std::string(kSampleHeader) +
                            "1,0,0,L1,10,0x1000,8,\n"
                            "too,few,fields\n"
                            "2,0,0,L2,20,0x1008,8,\n");
  SampleParseResult r = parse_samples(path);
  CHECK(r.samples.size() == 2);
  CHECK(r.malformed_rows == 1);
}

TEST_CASE("parse_samples hard errors") {
  testutil::TempDir dir;
  CHECK_THROWS_AS(parse_samples(dir.path() / "absent.csv"), Error);

  auto bad_header = dir.write("h.csv", "timestamp,rank\n1,2\n");
  CHECK_THROWS_WITH_AS(parse_samples(bad_header),
                       doctest::Contains("missing mandatory column"), Error);

  auto bad_latency = dir.write(
      "lat.csv", std::string(kSampleHeader) + "1,0,0,L1,fast,0x0,8,\n");
  CHECK_THROWS_WITH_AS(parse_samples(bad_latency),
                       doctest::Contains("non-numeric"), Error);

  auto bad_addr = dir.write(
      "addr.csv", std::string(kSampleHeader) + "1,0,0,L1,10,zz,8,\n");
  CHECK_THROWS_AS(parse_samples(bad_addr), Error);

  auto bad_width = dir.write(
      "w.csv", std::string(kSampleHeader) + "1,0,0,L1,10,0x0,7,\n");
  CHECK_THROWS_WITH_AS(parse_samples(bad_width),
                       doctest::Contains("bytes_read"), Error);

  auto bad_source = dir.write(
      "s.csv", std::string(kSampleHeader) + "1,0,0,DRAM,10,0x0,8,\n");
  CHECK_THROWS_WITH_AS(parse_samples(bad_source),
                       doctest::Contains("data_source"), Error);
}

TEST_CASE("parse_mpi_traces basics") {
  testutil::TempDir dir;
  auto path = dir.write("traces.csv",
                        std::string(kTraceHeader) +
                            "recv.c:10,0,1,7,world,0x1000,256,100,200\n"
                            "recv.c:10,0,1,7,world,0x1000,256,300,400\n");
  auto records = parse_mpi_traces(path);
  REQUIRE(records.size() == 2);  // same buffer received twice: no dedup
  CHECK(records[0].buf_addr == 0x1000);
  CHECK(records[0].buf_bytes == 256);
  CHECK(records[0].buf_end() == 0x1100);
  CHECK(records[0].contains(0x10ff));
  CHECK(!records[0].contains(0x1100));
  CHECK(records[0].t_post_ns == 100);
  CHECK(records[0].t_complete_ns == 200);
}

TEST_CASE("parse_mpi_traces rejects completion before post") {
  testutil::TempDir dir;
  auto path = dir.write("traces.csv",
                        std::string(kTraceHeader) +
                            "recv.c:10,0,1,7,world,0x1000,256,500,400\n");
  CHECK_THROWS_WITH_AS(parse_mpi_traces(path),
                       doctest::Contains("t_complete < t_post"), Error);
}

TEST_CASE("parse_counters accepts a consistent summary") {
  testutil::TempDir dir;
  auto path = dir.write("counters.json", minimal_counters_json());
  CounterSummary c = parse_counters(path);
  CHECK(c.ranks.at(0).ld_ins == 1000000000);
  CHECK(c.socket_of(0) == 0);
  CHECK(c.imc_read_bytes_for_rank(0) == 36500000000ULL);
}

TEST_CASE("parse_counters rejects hierarchy violations") {
  testutil::TempDir dir;
  auto path = dir.write("counters.json", R"({
    "ranks": [{"rank":0,"ld_ins":100,"l1_ldm":10,"l3_ldm":20,
               "tot_cyc":1,"wall_time_ns":1}],
    "sockets": [{"socket":0,"imc_read_bytes":0}],
    "rank_socket": {"0":0}
  })");
  CHECK_THROWS_WITH_AS(parse_counters(path),
                       doctest::Contains("l3_ldm > l1_ldm"), Error);

  auto path2 = dir.write("counters2.json", R"({
    "ranks": [{"rank":0,"ld_ins":100,"l1_ldm":200,"l3_ldm":20,
               "tot_cyc":1,"wall_time_ns":1}],
    "sockets": [{"socket":0,"imc_read_bytes":0}],
    "rank_socket": {"0":0}
  })");
  CHECK_THROWS_WITH_AS(parse_counters(path2),
                       doctest::Contains("l1_ldm > ld_ins"), Error);
}

TEST_CASE("parse_counters rejects a rank without socket") {
  testutil::TempDir dir;
  auto path = dir.write("counters.json", R"({
    "ranks": [{"rank":0,"ld_ins":100,"l1_ldm":10,"l3_ldm":1,
               "tot_cyc":1,"wall_time_ns":1}],
    "sockets": [{"socket":0,"imc_read_bytes":0}],
    "rank_socket": {}
  })");
  CHECK_THROWS_WITH_AS(parse_counters(path),
                       doctest::Contains("no socket mapping"), Error);
}

TEST_CASE("two ranks on one socket resolve the same uncore bytes") {
  testutil::TempDir dir;
  auto path = dir.write("counters.json", R"({
    "ranks": [
      {"rank":0,"ld_ins":100,"l1_ldm":10,"l3_ldm":1,"tot_cyc":1,"wall_time_ns":5},
      {"rank":1,"ld_ins":100,"l1_ldm":10,"l3_ldm":1,"tot_cyc":1,"wall_time_ns":5}
    ],
    "sockets": [{"socket":0,"imc_read_bytes":12345}],
    "rank_socket": {"0":0, "1":0}
  })");
  CounterSummary c = parse_counters(path);
  CHECK(c.imc_read_bytes_for_rank(0) == 12345);
  CHECK(c.imc_read_bytes_for_rank(1) == 12345);
}

TEST_CASE("parsing is deterministic") {
  testutil::TempDir dir;
  std::string body = std::string(kSampleHeader) +
                     "5,1,0,L1,10,0x2000,8,a.c:1\n"
                     "1,0,0,MEM,50,0x1000,8,b.c:2\n";
  auto p1 = dir.write("a.csv", body);
  auto p2 = dir.write("b.csv", body);
  CHECK(parse_samples(p1).samples == parse_samples(p2).samples);
}

TEST_CASE("finalize_bundle sorts and normalizes to epoch zero") {
  TraceBundle b;
  b.params = ModelParams{};
  b.counters.ranks[0] = RankCounters{100, 10, 1, 1, 1000};
  b.counters.ranks[1] = RankCounters{100, 10, 1, 1, 1000};
  b.counters.rank_socket[0] = 0;
  b.counters.rank_socket[1] = 0;
  b.counters.socket_imc_read_bytes[0] = 1;
  LoadSample s1;
  s1.timestamp_ns = 5000;
  s1.rank = 1;
  s1.source = DataSource::L1Hit;
  LoadSample s2 = s1;
  s2.timestamp_ns = 6000;
  s2.rank = 0;
  b.samples = {s1, s2};
  MpiRecvRecord t;
  t.call_site = "x";
  t.rank = 0;
  t.buf_addr = 0x1000;
  t.buf_bytes = 64;
  t.t_post_ns = 4000;
  t.t_complete_ns = 4500;
  b.traces = {t};

  TraceBundle out = finalize_bundle(std::move(b));
  CHECK(out.samples[0].rank == 0);  // sorted by (rank, timestamp)
  CHECK(out.traces[0].t_post_ns == 0);  // 4000 was the bundle minimum
  CHECK(out.traces[0].t_complete_ns == 500);
  CHECK(out.samples[0].timestamp_ns == 2000);
  CHECK(out.samples[1].timestamp_ns == 1000);
}

TEST_CASE("finalize_bundle requires counters for sampled ranks") {
  TraceBundle b;
  b.params = ModelParams{};
  LoadSample s;
  s.rank = 3;
  s.source = DataSource::L1Hit;
  b.samples = {s};
  CHECK_THROWS_WITH_AS(finalize_bundle(std::move(b)),
                       doctest::Contains("no counters"), Error);
}
