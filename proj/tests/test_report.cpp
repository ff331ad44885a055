// Copyright 2026 The cxlpredict Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "cxlpredict/overhead.hpp"
#include "cxlpredict/report.hpp"
#include "cxlpredict/synth.hpp"

using namespace cxlpredict;

namespace {

// Two call sites on one rank, deterministic ground truth.
WorkloadSpec small_spec() {
  WorkloadSpec spec;
  spec.params.cpu_freq = 2e9;
  spec.params.sampling_rate = 10.0;
  spec.ranks.push_back(RankSpec{0, 0, 1'000'000'000, 1'000'000'000,
                                0.0, 0.0, 0.05});
  CallSiteSpec a;
  a.call_site = "halo_n";
  a.trace_count = 5;
  a.buf_bytes = 4096;
  a.samples_per_trace = 20;
  a.mix = BracketMix{0.5, 0.2, 0.3};
  spec.call_sites.push_back(a);
  CallSiteSpec b = a;
  b.call_site = "halo_w";
  b.mix = BracketMix{0.9, 0.05, 0.05};
  spec.call_sites.push_back(b);
  return spec;
}

}  // namespace

TEST_CASE("predict on an empty bundle yields no calls") {
  TraceBundle bundle;
  bundle.params = ModelParams{};
  Report r = predict(bundle, PredictOptions{});
  CHECK(r.calls.empty());
  CHECK(r.quality.total_samples == 0);
}

TEST_CASE("predict totals compose from the four operation outputs") {
  TraceBundle bundle = gen_workload(small_spec(), 7);
  PredictOptions options;
  Report r = predict(bundle, options);
  REQUIRE(r.calls.size() == 2);
  for (const auto& c : r.calls) {
    CHECK(c.total_mpi == c.t_transfer_mpi + c.t_access_mpi);
    CHECK(c.total_cxl == c.t_transfer_cxl + c.t_access_cxl);
    CHECK(c.delta == c.total_mpi - c.total_cxl);
    CHECK(c.trace_count == 5);
    CHECK(c.attributed_sample_count == 100);
    CHECK(!c.low_confidence);

    // cross-check against the operations applied directly
    std::vector<MpiRecvRecord> site_traces;
    for (const auto& t : bundle.traces) {
      if (t.call_site == c.call_site) site_traces.push_back(t);
    }
    CHECK(c.t_transfer_mpi ==
          doctest::Approx(transfer_mpi(site_traces, bundle.params))
              .epsilon(1e-12));
    CHECK(c.t_transfer_cxl ==
          doctest::Approx(transfer_cxl(site_traces, bundle.params))
              .epsilon(1e-12));
  }
}

TEST_CASE("call sites without samples are low-confidence with zero access") {
  WorkloadSpec spec = small_spec();
  spec.call_sites[1].samples_per_trace = 0;
  TraceBundle bundle = gen_workload(spec, 3);
  Report r = predict(bundle, PredictOptions{});
  REQUIRE(r.calls.size() == 2);
  const CallPrediction* quiet = nullptr;
  for (const auto& c : r.calls) {
    if (c.call_site == "halo_w") quiet = &c;
  }
  REQUIRE(quiet != nullptr);
  CHECK(quiet->low_confidence);
  CHECK(quiet->attributed_sample_count == 0);
  CHECK(quiet->t_access_mpi == 0.0);
  CHECK(quiet->t_access_cxl == 0.0);
  CHECK(quiet->total_mpi == quiet->t_transfer_mpi);
}

TEST_CASE("rank_calls orders by delta and labels against the band") {
  std::vector<CallPrediction> calls(3);
  calls[0].call_site = "b";
  calls[0].total_mpi = 100000.0;
  calls[0].delta = -2000.0;
  calls[1].call_site = "a";
  calls[1].total_mpi = 100000.0;
  calls[1].delta = 5000.0;
  calls[2].call_site = "c";
  calls[2].total_mpi = 100000.0;
  calls[2].delta = 100.0;  // within 1% of total_mpi

  auto ranked = rank_calls(calls, 0.01);
  REQUIRE(ranked.size() == 3);
  CHECK(ranked[0].call_site == "a");
  CHECK(ranked[0].advice == Advice::Recommend);
  CHECK(ranked[1].call_site == "c");
  CHECK(ranked[1].advice == Advice::Neutral);
  CHECK(ranked[2].call_site == "b");
  CHECK(ranked[2].advice == Advice::KeepMpi);
}

TEST_CASE("rank_calls breaks exact delta ties by call site") {
  std::vector<CallPrediction> calls(3);
  for (std::size_t i = 0; i < 3; ++i) {
    calls[i].total_mpi = 1000.0;
    calls[i].delta = 0.0;
  }
  calls[0].call_site = "gamma";
  calls[1].call_site = "alpha";
  calls[2].call_site = "beta";
  auto ranked = rank_calls(calls, 0.01);
  CHECK(ranked[0].call_site == "alpha");
  CHECK(ranked[1].call_site == "beta");
  CHECK(ranked[2].call_site == "gamma");
  for (const auto& c : ranked) CHECK(c.advice == Advice::Neutral);
}

TEST_CASE("ranked output is a permutation of the input") {
  TraceBundle bundle = gen_workload(small_spec(), 11);
  Report r = predict(bundle, PredictOptions{});
  std::set<std::string> names;
  for (const auto& c : r.calls) names.insert(c.call_site);
  CHECK(names == std::set<std::string>{"halo_n", "halo_w"});
}

TEST_CASE("emit is deterministic and shares sum to one") {
  TraceBundle bundle = gen_workload(small_spec(), 5);
  PredictOptions options;
  options.unpack_call_sites.insert("halo_n");
  Report r1 = predict(bundle, options);
  Report r2 = predict(bundle, options);
  CHECK(emit_json(r1) == emit_json(r2));
  CHECK(emit_csv(r1) == emit_csv(r2));
  CHECK(emit_breakdown_csv(r1) == emit_breakdown_csv(r2));

  for (const auto& c : r1.calls) {
    double mpi_sum = c.transfer_share_mpi + c.t_access_mpi / c.total_mpi;
    double cxl_sum = c.transfer_share_cxl + c.t_access_cxl / c.total_cxl;
    CHECK(std::abs(mpi_sum - 1.0) <= 1e-9);
    CHECK(std::abs(cxl_sum - 1.0) <= 1e-9);
    CHECK(c.speedup == doctest::Approx(c.total_mpi / c.total_cxl));
  }
}

TEST_CASE("emit handles an empty prediction list") {
  Report r;
  r.params = ModelParams{};
  std::string json = emit_json(r);
  CHECK(json.find("\"calls\": []") != std::string::npos);
  std::string csv = emit_csv(r);
  CHECK(csv.find("call_site,") == 0);
  CHECK(csv.find('\n') == csv.size() - 1);  // header only
}

TEST_CASE("global totals equal the sum of per-call totals") {
  TraceBundle bundle = gen_workload(small_spec(), 13);
  Report r = predict(bundle, PredictOptions{});
  double mpi = 0.0;
  double cxl = 0.0;
  for (const auto& c : r.calls) {
    mpi += c.total_mpi;
    cxl += c.total_cxl;
  }
  std::string json = emit_json(r);
  auto find_total = [&](const std::string& key) {
    auto pos = json.find(key);
    REQUIRE(pos != std::string::npos);
    return std::stod(json.substr(pos + key.size() + 2));
  };
  CHECK(find_total("\"total_mpi_ns\"") ==
        doctest::Approx(mpi).epsilon(1e-12));
  CHECK(find_total("\"total_cxl_ns\"") ==
        doctest::Approx(cxl).epsilon(1e-12));
}

TEST_CASE("transfer dominates for tiny buffers over many exchanges") {
  // Stencil-like regime: small halos, many iterations, Optane-class pool.
  WorkloadSpec spec;
  spec.params.cpu_freq = 2e9;
  spec.params.sampling_rate = 1.0;
  spec.ranks.push_back(RankSpec{0, 0, 1'000'000'000, 1'000'000'000,
                                0.0, 0.0, 0.05});
  CallSiteSpec cs;
  cs.call_site = "halo_32";
  cs.trace_count = 200;
  cs.buf_bytes = 256;  // 32 cells of 8 bytes
  cs.samples_per_trace = 1;
  cs.mix = BracketMix{0.8, 0.1, 0.1};
  cs.lat_hit = LatencyRange{4, 20};
  cs.lat_lfb = LatencyRange{30, 60};
  cs.lat_miss = LatencyRange{80, 120};
  spec.call_sites.push_back(cs);
  TraceBundle bundle = gen_workload(spec, 21);
  Report r = predict(bundle, PredictOptions{});
  REQUIRE(r.calls.size() == 1);
  CHECK(r.calls[0].transfer_share_mpi > 0.9);
  CHECK(r.calls[0].transfer_share_cxl > 0.9);
}

TEST_CASE("first global weight map only covers sampled ranks") {
  WorkloadSpec spec = small_spec();
  spec.ranks.push_back(RankSpec{9, 0, 1, 1'000'000'000, 0.0, 0.0, 0.0});
  TraceBundle bundle = gen_workload(spec, 2);
  // rank 9 has counters (with ld_ins 1) but no samples: its weights are never
  // requested, so a predict run must not fail on it
  Report r = predict(bundle, PredictOptions{});
  CHECK(r.weights.contains(0));
  CHECK(!r.weights.contains(9));
}
