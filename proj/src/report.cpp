// Copyright 2026 The cxlpredict Authors
// SPDX-License-Identifier: Apache-2.0

#include "cxlpredict/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "cxlpredict/attribute.hpp"
#include "cxlpredict/format.hpp"
#include "cxlpredict/overhead.hpp"

namespace cxlpredict {

namespace {

Advice advise(double delta, double epsilon) {
  if (std::abs(delta) <= epsilon) return Advice::Neutral;
  return delta > 0.0 ? Advice::Recommend : Advice::KeepMpi;
}

}  // namespace

Report predict(const TraceBundle& bundle, const PredictOptions& options,
               const BundleStats* parse_stats) {
  const ModelParams& p = bundle.params;
  Report report;
  report.options = options;
  report.params = p;
  report.quality.total_samples = bundle.samples.size();
  if (parse_stats) report.quality.malformed_rows = parse_stats->malformed_rows;

  // Unknown-source samples cannot be bracketed; drop them here, visibly.
  std::vector<LoadSample> modelable;
  modelable.reserve(bundle.samples.size());
  for (const auto& s : bundle.samples) {
    if (s.source == DataSource::Unknown) {
      ++report.quality.unknown_source_samples;
    } else {
      modelable.push_back(s);
    }
  }

  MatchResult match = match_samples(modelable, bundle.traces);
  report.quality.attributed_samples = match.attributed.size();
  report.quality.unmatched_samples = match.unmatched;

  auto stats = build_call_site_stats(match, modelable, bundle.traces, p);

  // Weights for every rank that contributed an attributed sample.
  for (const auto& [call_site, cs] : stats) {
    (void)call_site;
    for (const auto& a : cs.samples) {
      std::int32_t rank = modelable[a.sample_index].rank;
      if (report.weights.contains(rank)) continue;
      RankWeights rw;
      rw.raw = metrics(bundle.counters, p, rank,
                       mean_bytes_read_for_rank(bundle.samples, rank));
      rw.subsequent = compose_weights(rw.raw, p);
      rw.first_load = first_load_weights(rw.subsequent, p);
      report.weights.emplace(rank, rw);
    }
  }

  // Traces grouped by call site; std::map keeps the pre-ranking order
  // deterministic.
  std::map<std::string, std::vector<MpiRecvRecord>> traces_by_site;
  for (const auto& t : bundle.traces) traces_by_site[t.call_site].push_back(t);

  std::vector<CallPrediction> calls;
  for (const auto& [call_site, site_traces] : traces_by_site) {
    CallPrediction cp;
    cp.call_site = call_site;
    cp.trace_count = site_traces.size();
    cp.unpack = options.unpack_call_sites.contains(call_site);
    cp.t_transfer_mpi = transfer_mpi(site_traces, p);
    cp.t_transfer_cxl = transfer_cxl(site_traces, p);

    auto stats_it = stats.find(call_site);
    if (stats_it == stats.end()) {
      cp.low_confidence = true;
    } else {
      const CallSiteStats& cs = stats_it->second;
      cp.attributed_sample_count = cs.samples.size();
      cp.n_loads_per_element = cs.n;
      cp.demand_frac = cs.split.demand;
      std::set<std::int32_t> ranks;
      for (const auto& a : cs.samples) ranks.insert(modelable[a.sample_index].rank);
      for (std::int32_t rank : ranks) {
        const RankWeights& rw = report.weights.at(rank);
        BracketLatencies b = bracket_latencies(cs.samples, modelable, p, rank);
        cp.t_access_mpi += access_mpi(b, rw.subsequent, p);
        cp.t_access_cxl += access_cxl(b, cs.split, cs.n, rw.subsequent,
                                      rw.first_load, p, cp.unpack);
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
    calls.push_back(std::move(cp));
  }

  report.calls = rank_calls(std::move(calls), options.epsilon_frac);
  return report;
}

std::vector<CallPrediction> rank_calls(std::vector<CallPrediction> calls,
                                       double epsilon_frac) {
  for (auto& c : calls) {
    c.advice = advise(c.delta, epsilon_frac * c.total_mpi);
  }
  std::sort(calls.begin(), calls.end(),
            [](const CallPrediction& a, const CallPrediction& b) {
              if (a.delta != b.delta) return a.delta > b.delta;
              return a.call_site < b.call_site;
            });
  return calls;
}

namespace {

using nlohmann::ordered_json;

ordered_json weights_json(const Weights& w) {
  return ordered_json{{"w_mbw", w.mbw},
                      {"w_mlat", w.mlat},
                      {"w_cbw", w.cbw},
                      {"w_clat", w.clat},
                      {"w_compute", w.compute}};
}

ordered_json metrics_json(const RawMetrics& m) {
  return ordered_json{{"val_mbw", m.val_mbw},
                      {"val_mlat", m.val_mlat},
                      {"val_cbw_l1", m.val_cbw_l1},
                      {"val_cbw_l2", m.val_cbw_l2},
                      {"val_clat", m.val_clat}};
}

ordered_json call_json(const CallPrediction& c) {
  ordered_json j;
  j["call_site"] = c.call_site;
  j["advice"] = std::string(advice_name(c.advice));
  j["trace_count"] = c.trace_count;
  j["attributed_sample_count"] = c.attributed_sample_count;
  j["low_confidence"] = c.low_confidence;
  j["unpack"] = c.unpack;
  j["n_loads_per_element"] = c.n_loads_per_element;
  j["demand_frac"] = c.demand_frac;
  j["t_transfer_mpi_ns"] = c.t_transfer_mpi;
  j["t_access_mpi_ns"] = c.t_access_mpi;
  j["total_mpi_ns"] = c.total_mpi;
  j["t_transfer_cxl_ns"] = c.t_transfer_cxl;
  j["t_access_cxl_ns"] = c.t_access_cxl;
  j["total_cxl_ns"] = c.total_cxl;
  j["delta_ns"] = c.delta;
  j["speedup"] = c.speedup;
  j["transfer_share_mpi"] = c.transfer_share_mpi;
  j["access_share_mpi"] =
      c.total_mpi > 0.0 ? c.t_access_mpi / c.total_mpi : 0.0;
  j["transfer_share_cxl"] = c.transfer_share_cxl;
  j["access_share_cxl"] =
      c.total_cxl > 0.0 ? c.t_access_cxl / c.total_cxl : 0.0;
  return j;
}

}  // namespace

std::string emit_json(const Report& report) {
  ordered_json j;
  j["schema"] = "cxlpredict-report-v1";
  j["options"] = ordered_json{
      {"epsilon", report.options.epsilon_frac},
      {"unpack", std::vector<std::string>(report.options.unpack_call_sites.begin(),
                                          report.options.unpack_call_sites.end())}};
  j["params"] = nlohmann::ordered_json::parse(params_to_json(report.params));
  j["data_quality"] = ordered_json{
      {"total_samples", report.quality.total_samples},
      {"unknown_source_samples", report.quality.unknown_source_samples},
      {"attributed_samples", report.quality.attributed_samples},
      {"unmatched_samples", report.quality.unmatched_samples},
      {"malformed_rows", report.quality.malformed_rows}};
  ordered_json weights = ordered_json::array();
  for (const auto& [rank, rw] : report.weights) {
    ordered_json entry;
    entry["rank"] = rank;
    entry["subsequent"] = weights_json(rw.subsequent);
    entry["first_load"] = weights_json(rw.first_load);
    entry["metrics"] = metrics_json(rw.raw);
    weights.push_back(std::move(entry));
  }
  j["weights"] = std::move(weights);
  ordered_json calls = ordered_json::array();
  double total_mpi = 0.0;
  double total_cxl = 0.0;
  for (const auto& c : report.calls) {
    calls.push_back(call_json(c));
    total_mpi += c.total_mpi;
    total_cxl += c.total_cxl;
  }
  j["calls"] = std::move(calls);
  j["totals"] = ordered_json{{"total_mpi_ns", total_mpi},
                             {"total_cxl_ns", total_cxl},
                             {"delta_ns", total_mpi - total_cxl}};
  return j.dump(2) + "\n";
}

std::string emit_csv(const Report& report) {
  std::ostringstream out;
  out << "call_site,advice,trace_count,attributed_sample_count,low_confidence,"
         "unpack,n_loads_per_element,t_transfer_mpi_ns,t_access_mpi_ns,"
         "total_mpi_ns,t_transfer_cxl_ns,t_access_cxl_ns,total_cxl_ns,"
         "delta_ns,speedup\n";
  for (const auto& c : report.calls) {
    out << c.call_site << ',' << advice_name(c.advice) << ',' << c.trace_count
        << ',' << c.attributed_sample_count << ','
        << (c.low_confidence ? 1 : 0) << ',' << (c.unpack ? 1 : 0) << ','
        << format_double(c.n_loads_per_element) << ','
        << format_double(c.t_transfer_mpi) << ','
        << format_double(c.t_access_mpi) << ',' << format_double(c.total_mpi)
        << ',' << format_double(c.t_transfer_cxl) << ','
        << format_double(c.t_access_cxl) << ',' << format_double(c.total_cxl)
        << ',' << format_double(c.delta) << ',' << format_double(c.speedup)
        << '\n';
  }
  return out.str();
}

std::string emit_breakdown_csv(const Report& report) {
  std::ostringstream out;
  out << "call_site,transfer_share_mpi,access_share_mpi,transfer_share_cxl,"
         "access_share_cxl\n";
  for (const auto& c : report.calls) {
    double access_mpi_share =
        c.total_mpi > 0.0 ? c.t_access_mpi / c.total_mpi : 0.0;
    double access_cxl_share =
        c.total_cxl > 0.0 ? c.t_access_cxl / c.total_cxl : 0.0;
    out << c.call_site << ',' << format_double(c.transfer_share_mpi) << ','
        << format_double(access_mpi_share) << ','
        << format_double(c.transfer_share_cxl) << ','
        << format_double(access_cxl_share) << '\n';
  }
  return out.str();
}

}  // namespace cxlpredict
