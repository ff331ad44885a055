// Copyright 2026 The cxlpredict Authors
// SPDX-License-Identifier: Apache-2.0

#include "cxlpredict/types.hpp"

namespace cxlpredict {

Bracket bracket_of(DataSource s) {
  switch (s) {
    case DataSource::L1Hit:
    case DataSource::L2Hit:
    case DataSource::L3Hit:
      return Bracket::CacheHit;
    case DataSource::Lfb:
      return Bracket::Lfb;
    case DataSource::LocalMem:
    case DataSource::RemoteMem:
      return Bracket::CacheMiss;
    case DataSource::Unknown:
      break;
  }
  throw Error("data_source: Unknown samples cannot be modeled");
}

std::string_view source_token(DataSource s) {
  switch (s) {
    case DataSource::L1Hit: return "L1";
    case DataSource::L2Hit: return "L2";
    case DataSource::L3Hit: return "L3";
    case DataSource::Lfb: return "LFB";
    case DataSource::LocalMem: return "MEM";
    case DataSource::RemoteMem: return "REMOTE_MEM";
    case DataSource::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

DataSource source_from_token(std::string_view token) {
  if (token == "L1") return DataSource::L1Hit;
  if (token == "L2") return DataSource::L2Hit;
  if (token == "L3") return DataSource::L3Hit;
  if (token == "LFB") return DataSource::Lfb;
  if (token == "MEM") return DataSource::LocalMem;
  if (token == "REMOTE_MEM") return DataSource::RemoteMem;
  if (token == "UNKNOWN") return DataSource::Unknown;
  throw Error("data_source: unrecognized token '" + std::string(token) + "'");
}

std::string_view category_name(Category c) {
  switch (c) {
    case Category::Mbw: return "MBW";
    case Category::Mlat: return "MLAT";
    case Category::Cbw: return "CBW";
    case Category::Clat: return "CLAT";
    case Category::Compute: return "Compute";
  }
  return "?";
}

std::int32_t CounterSummary::socket_of(std::int32_t rank) const {
  auto it = rank_socket.find(rank);
  if (it == rank_socket.end()) {
    throw Error("counters: no socket mapping for rank " + std::to_string(rank));
  }
  return it->second;
}

std::uint64_t CounterSummary::imc_read_bytes_for_rank(std::int32_t rank) const {
  auto it = socket_imc_read_bytes.find(socket_of(rank));
  if (it == socket_imc_read_bytes.end()) {
    throw Error("counters: no imc_read_bytes for socket of rank " +
                std::to_string(rank));
  }
  return it->second;
}

double Weights::operator[](Category c) const {
  switch (c) {
    case Category::Mbw: return mbw;
    case Category::Mlat: return mlat;
    case Category::Cbw: return cbw;
    case Category::Clat: return clat;
    case Category::Compute: return compute;
  }
  return 0.0;
}

std::string_view advice_name(Advice a) {
  switch (a) {
    case Advice::Recommend: return "RECOMMEND";
    case Advice::Neutral: return "NEUTRAL";
    case Advice::KeepMpi: return "KEEP_MPI";
  }
  return "?";
}

}  // namespace cxlpredict
