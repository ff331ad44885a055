// Copyright 2026 The cxlpredict Authors
// SPDX-License-Identifier: Apache-2.0

#include "cxlpredict/params.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cxlpredict {

namespace {

void require_positive(double v, const char* field) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(std::string(field) + ": non-positive throughput, duration, "
                "frequency, or size");
  }
}

void require_threshold(const ThresholdPair& t, const char* field) {
  if (!(t.lower >= 0.0) || !std::isfinite(t.lower) || !std::isfinite(t.upper)) {
    throw Error(std::string(field) + ": thresholds must be finite and >= 0");
  }
  if (!(t.lower < t.upper)) {
    throw Error(std::string(field) + ": lower >= upper");
  }
}

}  // namespace

ModelParams validate_params(ModelParams p) {
  require_positive(p.mpi_lat, "mpi_lat");
  require_positive(p.mpi_bw, "mpi_bw");
  require_positive(p.cxl_lat, "cxl_lat");
  require_positive(p.mem_lat, "mem_lat");
  require_positive(p.cxl_atomic_lat, "cxl_atomic_lat");
  require_positive(p.peak_mem_bw, "peak_mem_bw");
  require_positive(p.peak_l1_bw, "peak_l1_bw");
  require_positive(p.peak_l2_bw, "peak_l2_bw");
  require_positive(p.cpu_freq, "cpu_freq");
  require_positive(p.cache_line, "cache_line");
  if (!(p.lpf_lat >= 1.0)) throw Error("lpf_lat: must be >= 1");
  if (!(p.lpf_bw >= 1.0)) throw Error("lpf_bw: must be >= 1");
  if (!(p.sampling_rate >= 1.0)) throw Error("sampling_rate: must be >= 1");
  if (!(p.compute_max_weight >= 0.0 && p.compute_max_weight <= 1.0)) {
    throw Error("compute_max_weight: must be in [0,1]");
  }
  require_threshold(p.thr_mbw, "thr_mbw");
  require_threshold(p.thr_mlat, "thr_mlat");
  require_threshold(p.thr_cbw, "thr_cbw");
  require_threshold(p.thr_clat, "thr_clat");
  return p;
}

double cycles_to_ns(double cycles, const ModelParams& p) {
  return cycles * (1e9 / p.cpu_freq);
}

double ns_to_cycles(double ns, const ModelParams& p) {
  return ns * (p.cpu_freq / 1e9);
}

double lpf_for(Category c, const ModelParams& p) {
  switch (c) {
    case Category::Mlat:
    case Category::Clat:
      return p.lpf_lat;
    case Category::Mbw:
    case Category::Cbw:
    case Category::Compute:
      return p.lpf_bw;
  }
  return p.lpf_bw;
}

namespace {

using nlohmann::json;

double get_number(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end()) throw Error(std::string("params: missing field ") + field);
  if (!it->is_number()) {
    throw Error(std::string("params: field ") + field + " must be a number");
  }
  return it->get<double>();
}

ThresholdPair get_threshold(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end()) throw Error(std::string("params: missing field ") + field);
  if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() ||
      !(*it)[1].is_number()) {
    throw Error(std::string("params: field ") + field +
                " must be a [lower, upper] pair");
  }
  return ThresholdPair{(*it)[0].get<double>(), (*it)[1].get<double>()};
}

}  // namespace

ModelParams parse_params_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("params: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error("params: top level must be an object");

  ModelParams p;
  p.mpi_lat = get_number(j, "mpi_lat");
  p.mpi_bw = get_number(j, "mpi_bw");
  p.cxl_lat = get_number(j, "cxl_lat");
  p.mem_lat = get_number(j, "mem_lat");
  p.cxl_atomic_lat = get_number(j, "cxl_atomic_lat");
  p.lpf_lat = get_number(j, "lpf_lat");
  p.lpf_bw = get_number(j, "lpf_bw");
  p.compute_max_weight = get_number(j, "compute_max_weight");
  p.thr_mbw = get_threshold(j, "thr_mbw");
  p.thr_mlat = get_threshold(j, "thr_mlat");
  p.thr_cbw = get_threshold(j, "thr_cbw");
  p.thr_clat = get_threshold(j, "thr_clat");
  p.peak_mem_bw = get_number(j, "peak_mem_bw");
  p.peak_l1_bw = get_number(j, "peak_l1_bw");
  p.peak_l2_bw = get_number(j, "peak_l2_bw");
  p.cpu_freq = get_number(j, "cpu_freq");
  p.sampling_rate = get_number(j, "sampling_rate");
  p.cache_line = j.contains("cache_line") ? get_number(j, "cache_line") : 64.0;
  return validate_params(p);
}

ModelParams load_params(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("params: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_params_json(buf.str());
}

std::string params_to_json(const ModelParams& p) {
  nlohmann::ordered_json j;
  j["mpi_lat"] = p.mpi_lat;
  j["mpi_bw"] = p.mpi_bw;
  j["cxl_lat"] = p.cxl_lat;
  j["mem_lat"] = p.mem_lat;
  j["cxl_atomic_lat"] = p.cxl_atomic_lat;
  j["lpf_lat"] = p.lpf_lat;
  j["lpf_bw"] = p.lpf_bw;
  j["compute_max_weight"] = p.compute_max_weight;
  j["thr_mbw"] = {p.thr_mbw.lower, p.thr_mbw.upper};
  j["thr_mlat"] = {p.thr_mlat.lower, p.thr_mlat.upper};
  j["thr_cbw"] = {p.thr_cbw.lower, p.thr_cbw.upper};
  j["thr_clat"] = {p.thr_clat.lower, p.thr_clat.upper};
  j["peak_mem_bw"] = p.peak_mem_bw;
  j["peak_l1_bw"] = p.peak_l1_bw;
  j["peak_l2_bw"] = p.peak_l2_bw;
  j["cpu_freq"] = p.cpu_freq;
  j["sampling_rate"] = p.sampling_rate;
  j["cache_line"] = p.cache_line;
  return j.dump(2) + "\n";
}

}  // namespace cxlpredict
