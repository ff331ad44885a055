// Copyright 2026 The cxlpredict Authors
// SPDX-License-Identifier: Apache-2.0

#include "cxlpredict/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

namespace cxlpredict {

namespace {

std::string read_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(std::string(what) + ": cannot open " + path.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Splits one CSV line; the formats here never quote or embed commas.
std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

template <typename T>
T parse_int(std::string_view s, const char* field, std::size_t row) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(std::string(field) + ": non-numeric value '" + std::string(s) +
                "' in row " + std::to_string(row));
  }
  return value;
}

double parse_double(std::string_view s, const char* field, std::size_t row) {
  double value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw Error(std::string(field) + ": non-numeric value '" + std::string(s) +
                "' in row " + std::to_string(row));
  }
  return value;
}

std::uint64_t parse_address(std::string_view s, const char* field,
                            std::size_t row) {
  std::string_view digits = s;
  int base = 10;
  if (digits.size() > 2 && digits[0] == '0' &&
      (digits[1] == 'x' || digits[1] == 'X')) {
    digits.remove_prefix(2);
    base = 16;
  }
  std::uint64_t value{};
  auto [ptr, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), value, base);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() ||
      digits.empty()) {
    throw Error(std::string(field) + ": non-numeric address '" +
                std::string(s) + "' in row " + std::to_string(row));
  }
  return value;
}

// Iterates data rows of a CSV body after verifying the exact header.
class CsvReader {
public:
  CsvReader(std::string text, std::string_view expected_header,
            const char* what)
      : text_(std::move(text)), what_(what) {
    auto line = next_line();
    if (!line) throw Error(std::string(what_) + ": missing header row");
    if (strip_cr(*line) != expected_header) {
      throw Error(std::string(what_) + ": missing mandatory column; expected "
                  "header '" + std::string(expected_header) + "'");
    }
  }

  // Returns the next non-empty data row, or nullopt at end. `row` is the
  // 1-based data row number.
  std::optional<std::vector<std::string_view>> next_row(std::size_t& row) {
    while (auto line = next_line()) {
      std::string_view stripped = strip_cr(*line);
      if (stripped.empty()) continue;
      ++row_;
      row = row_;
      return split_csv(stripped);
    }
    return std::nullopt;
  }

private:
  std::optional<std::string_view> next_line() {
    if (pos_ >= text_.size()) return std::nullopt;
    std::size_t nl = text_.find('\n', pos_);
    std::string_view line;
    if (nl == std::string::npos) {
      line = std::string_view(text_).substr(pos_);
      pos_ = text_.size();
    } else {
      line = std::string_view(text_).substr(pos_, nl - pos_);
      pos_ = nl + 1;
    }
    return line;
  }

  std::string text_;
  const char* what_;
  std::size_t pos_ = 0;
  std::size_t row_ = 0;
};

constexpr std::string_view kSamplesHeader =
    "timestamp_ns,rank,core_id,data_source,latency_cycles,address,bytes_read,"
    "code_location";
constexpr std::string_view kTracesHeader =
    "call_site,rank,src_rank,tag,comm,buf_addr_hex,buf_bytes,t_post_ns,"
    "t_complete_ns";

bool valid_load_width(std::uint32_t w) {
  return w == 1 || w == 2 || w == 4 || w == 8 || w == 16 || w == 32 || w == 64;
}

}  // namespace

SampleParseResult parse_samples(const std::filesystem::path& path) {
  CsvReader reader(read_file(path, "samples"), kSamplesHeader, "samples");
  SampleParseResult result;
  std::size_t row = 0;
  while (auto fields = reader.next_row(row)) {
    if (fields->size() != 8) {
      ++result.malformed_rows;
      continue;
    }
    LoadSample s;
    s.timestamp_ns = parse_int<std::int64_t>((*fields)[0], "timestamp_ns", row);
    s.rank = parse_int<std::int32_t>((*fields)[1], "rank", row);
    s.core_id = parse_int<std::int32_t>((*fields)[2], "core_id", row);
    try {
      s.source = source_from_token((*fields)[3]);
    } catch (const Error&) {
      throw Error("samples: unrecognized data_source '" +
                  std::string((*fields)[3]) + "' in row " +
                  std::to_string(row));
    }
    s.latency_cycles = parse_double((*fields)[4], "latency_cycles", row);
    s.address = parse_address((*fields)[5], "address", row);
    s.bytes_read = parse_int<std::uint32_t>((*fields)[6], "bytes_read", row);
    s.code_location = std::string((*fields)[7]);
    if (s.rank < 0 || s.core_id < 0) {
      throw Error("samples: negative rank/core_id in row " +
                  std::to_string(row));
    }
    if (!(s.latency_cycles >= 1.0)) {
      throw Error("samples: latency_cycles < 1 in row " + std::to_string(row));
    }
    if (!valid_load_width(s.bytes_read)) {
      throw Error("samples: bytes_read must be one of 1,2,4,8,16,32,64 in "
                  "row " + std::to_string(row));
    }
    if (s.source == DataSource::Unknown) ++result.unknown_source_rows;
    result.samples.push_back(std::move(s));
  }
  return result;
}

std::vector<MpiRecvRecord> parse_mpi_traces(const std::filesystem::path& path) {
  CsvReader reader(read_file(path, "mpi_traces"), kTracesHeader, "mpi_traces");
  std::vector<MpiRecvRecord> records;
  std::size_t row = 0;
  while (auto fields = reader.next_row(row)) {
    if (fields->size() != 9) {
      throw Error("mpi_traces: wrong field count in row " +
                  std::to_string(row));
    }
    MpiRecvRecord r;
    r.call_site = std::string((*fields)[0]);
    r.rank = parse_int<std::int32_t>((*fields)[1], "rank", row);
    r.src_rank = parse_int<std::int32_t>((*fields)[2], "src_rank", row);
    r.tag = parse_int<std::int64_t>((*fields)[3], "tag", row);
    r.comm = std::string((*fields)[4]);
    r.buf_addr = parse_address((*fields)[5], "buf_addr_hex", row);
    r.buf_bytes = parse_int<std::uint64_t>((*fields)[6], "buf_bytes", row);
    r.t_post_ns = parse_int<std::int64_t>((*fields)[7], "t_post_ns", row);
    r.t_complete_ns =
        parse_int<std::int64_t>((*fields)[8], "t_complete_ns", row);
    if (r.rank < 0 || r.src_rank < 0) {
      throw Error("mpi_traces: negative rank in row " + std::to_string(row));
    }
    if (r.buf_bytes == 0) {
      throw Error("mpi_traces: buf_bytes must be > 0 in row " +
                  std::to_string(row));
    }
    if (r.t_complete_ns < r.t_post_ns) {
      throw Error("mpi_traces: t_complete < t_post in row " +
                  std::to_string(row));
    }
    records.push_back(std::move(r));
  }
  return records;
}

CounterSummary parse_counters(const std::filesystem::path& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path, "counters"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("counters: invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("ranks") || !j.contains("sockets") ||
      !j.contains("rank_socket")) {
    throw Error("counters: need ranks, sockets, and rank_socket");
  }

  CounterSummary summary;
  for (const auto& entry : j.at("ranks")) {
    std::int32_t rank = entry.at("rank").get<std::int32_t>();
    RankCounters c;
    c.ld_ins = entry.at("ld_ins").get<std::uint64_t>();
    c.l1_ldm = entry.at("l1_ldm").get<std::uint64_t>();
    c.l3_ldm = entry.at("l3_ldm").get<std::uint64_t>();
    c.tot_cyc = entry.at("tot_cyc").get<std::uint64_t>();
    c.wall_time_ns = entry.at("wall_time_ns").get<std::int64_t>();
    if (c.l1_ldm > c.ld_ins) {
      throw Error("counters: l1_ldm > ld_ins for rank " + std::to_string(rank));
    }
    if (c.l3_ldm > c.l1_ldm) {
      throw Error("counters: l3_ldm > l1_ldm for rank " + std::to_string(rank));
    }
    if (c.wall_time_ns <= 0) {
      throw Error("counters: wall_time_ns must be > 0 for rank " +
                  std::to_string(rank));
    }
    summary.ranks[rank] = c;
  }
  for (const auto& entry : j.at("sockets")) {
    summary.socket_imc_read_bytes[entry.at("socket").get<std::int32_t>()] =
        entry.at("imc_read_bytes").get<std::uint64_t>();
  }
  for (const auto& [key, value] : j.at("rank_socket").items()) {
    summary.rank_socket[static_cast<std::int32_t>(std::stol(key))] =
        value.get<std::int32_t>();
  }
  for (const auto& [rank, counters] : summary.ranks) {
    (void)counters;
    std::int32_t socket = summary.socket_of(rank);  // throws if unmapped
    if (!summary.socket_imc_read_bytes.contains(socket)) {
      throw Error("counters: rank " + std::to_string(rank) +
                  " maps to socket " + std::to_string(socket) +
                  " which has no imc_read_bytes entry");
    }
  }
  return summary;
}

TraceBundle finalize_bundle(TraceBundle bundle) {
  std::sort(bundle.samples.begin(), bundle.samples.end(),
            [](const LoadSample& a, const LoadSample& b) {
              if (a.rank != b.rank) return a.rank < b.rank;
              if (a.timestamp_ns != b.timestamp_ns) {
                return a.timestamp_ns < b.timestamp_ns;
              }
              return a.address < b.address;
            });
  std::sort(bundle.traces.begin(), bundle.traces.end(),
            [](const MpiRecvRecord& a, const MpiRecvRecord& b) {
              if (a.rank != b.rank) return a.rank < b.rank;
              if (a.t_post_ns != b.t_post_ns) return a.t_post_ns < b.t_post_ns;
              return a.call_site < b.call_site;
            });

  std::int64_t epoch = std::numeric_limits<std::int64_t>::max();
  for (const auto& s : bundle.samples) epoch = std::min(epoch, s.timestamp_ns);
  for (const auto& t : bundle.traces) epoch = std::min(epoch, t.t_post_ns);
  if (epoch != std::numeric_limits<std::int64_t>::max() && epoch != 0) {
    for (auto& s : bundle.samples) s.timestamp_ns -= epoch;
    for (auto& t : bundle.traces) {
      t.t_post_ns -= epoch;
      t.t_complete_ns -= epoch;
    }
  }

  std::set<std::int32_t> sample_ranks;
  for (const auto& s : bundle.samples) sample_ranks.insert(s.rank);
  for (std::int32_t rank : sample_ranks) {
    if (!bundle.counters.ranks.contains(rank)) {
      throw Error("bundle: rank " + std::to_string(rank) +
                  " has samples but no counters");
    }
  }
  return bundle;
}

TraceBundle load_bundle(const std::filesystem::path& samples_path,
                        const std::filesystem::path& traces_path,
                        const std::filesystem::path& counters_path,
                        const std::filesystem::path& params_path,
                        BundleStats* stats) {
  TraceBundle bundle;
  SampleParseResult samples = parse_samples(samples_path);
  bundle.samples = std::move(samples.samples);
  bundle.traces = parse_mpi_traces(traces_path);
  bundle.counters = parse_counters(counters_path);
  bundle.params = load_params(params_path);
  if (stats) {
    stats->malformed_rows = samples.malformed_rows;
    stats->unknown_source_rows = samples.unknown_source_rows;
  }
  return finalize_bundle(std::move(bundle));
}

}  // namespace cxlpredict
