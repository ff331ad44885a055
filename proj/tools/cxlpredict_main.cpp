// Copyright 2026 The cxlpredict Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cxlpredict/attribute.hpp"
#include "cxlpredict/characterize.hpp"
#include "cxlpredict/format.hpp"
#include "cxlpredict/ingest.hpp"
#include "cxlpredict/kernels.hpp"
#include "cxlpredict/report.hpp"
#include "cxlpredict/synth.hpp"

#include <json.hpp>

namespace {

constexpr const char* kVersion = "cxlpredict 1.0.0";

void write_output(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw cxlpredict::Error("cannot write output file " + out_path);
  }
  out << content;
}

std::set<std::string> split_list(const std::string& csv) {
  std::set<std::string> items;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) items.insert(item);
  }
  return items;
}

struct CommonPaths {
  std::string samples, traces, counters, params;
};

int run_characterize(const CommonPaths& paths, const std::string& out_path) {
  using namespace cxlpredict;
  SampleParseResult samples = parse_samples(paths.samples);
  CounterSummary counters = parse_counters(paths.counters);
  ModelParams params = load_params(paths.params);

  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& [rank, rc] : counters.ranks) {
    (void)rc;
    RawMetrics m = metrics(counters, params, rank,
                           mean_bytes_read_for_rank(samples.samples, rank));
    Weights w = compose_weights(m, params);
    nlohmann::ordered_json entry;
    entry["rank"] = rank;
    entry["w_mbw"] = w.mbw;
    entry["w_mlat"] = w.mlat;
    entry["w_cbw"] = w.cbw;
    entry["w_clat"] = w.clat;
    entry["w_compute"] = w.compute;
    entry["metrics"] = nlohmann::ordered_json{{"val_mbw", m.val_mbw},
                                              {"val_mlat", m.val_mlat},
                                              {"val_cbw_l1", m.val_cbw_l1},
                                              {"val_cbw_l2", m.val_cbw_l2},
                                              {"val_clat", m.val_clat}};
    out.push_back(std::move(entry));
  }
  write_output(out.dump(2) + "\n", out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Per-call-site prediction of message-free CXL.mem data "
               "exchange versus MPI messaging"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonPaths paths;
  std::string out_path;
  std::string unpack_list;
  std::string format = "json";
  std::string dump_attribution;
  double epsilon = 0.01;

  auto add_input_flags = [&](CLI::App* cmd, bool needs_traces) {
    cmd->add_option("--samples", paths.samples, "samples.csv path")
        ->required();
    if (needs_traces) {
      cmd->add_option("--traces", paths.traces, "mpi_traces.csv path")
          ->required();
    }
    cmd->add_option("--counters", paths.counters, "counters.json path")
        ->required();
    cmd->add_option("--params", paths.params, "model parameter JSON path")
        ->required();
    cmd->add_option("--out", out_path, "output path (default: stdout)");
  };

  CLI::App* characterize =
      app.add_subcommand("characterize", "Per-rank workload weights as JSON");
  add_input_flags(characterize, false);

  CLI::App* predict = app.add_subcommand(
      "predict", "Per-call-site MPI vs. CXL prediction report");
  add_input_flags(predict, true);
  predict->add_option("--unpack", unpack_list,
                      "comma-separated call sites that need an unpack copy");
  predict->add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  predict->add_option("--epsilon", epsilon,
                      "NEUTRAL band as a fraction of total_mpi per call");
  predict->add_option("--dump-attribution", dump_attribution,
                      "write the sample-to-call pairing as CSV");

  CLI::App* breakdown = app.add_subcommand(
      "breakdown", "Transfer/access share pairs per call site (CSV)");
  add_input_flags(breakdown, true);
  breakdown->add_option("--unpack", unpack_list,
                        "comma-separated call sites that need an unpack copy");
  breakdown->add_option("--epsilon", epsilon,
                        "NEUTRAL band as a fraction of total_mpi per call");

  std::string spec_path;
  std::string synth_out_dir;
  std::uint64_t seed = 1;
  CLI::App* synth = app.add_subcommand(
      "synth", "Generate a synthetic trace bundle with known ground truth");
  synth->add_option("--spec", spec_path, "workload spec JSON")->required();
  synth->add_option("--seed", seed, "RNG seed");
  synth->add_option("--out", synth_out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_name() == "CallForHelp" || e.get_name() == "CallForVersion") {
      return app.exit(e);
    }
    app.exit(e);  // prints usage to stderr
    return 1;
  }

  try {
    if (characterize->parsed()) {
      return run_characterize(paths, out_path);
    }
    if (predict->parsed() || breakdown->parsed()) {
      using namespace cxlpredict;
      BundleStats stats;
      TraceBundle bundle = load_bundle(paths.samples, paths.traces,
                                       paths.counters, paths.params, &stats);
      PredictOptions options;
      options.epsilon_frac = epsilon;
      options.unpack_call_sites = split_list(unpack_list);
      Report report = cxlpredict::predict(bundle, options, &stats);
      if (!dump_attribution.empty()) {
        // Re-run the pairing on the modelable samples for the diagnostic.
        std::vector<LoadSample> modelable;
        for (const auto& s : bundle.samples) {
          if (s.source != DataSource::Unknown) modelable.push_back(s);
        }
        MatchResult match = match_samples(modelable, bundle.traces);
        std::ofstream out(dump_attribution, std::ios::binary);
        if (!out) {
          throw Error("cannot write attribution dump " + dump_attribution);
        }
        dump_attribution_csv(out, match, modelable, bundle.traces);
      }
      if (breakdown->parsed()) {
        write_output(emit_breakdown_csv(report), out_path);
      } else if (format == "csv") {
        write_output(emit_csv(report), out_path);
      } else {
        write_output(emit_json(report), out_path);
      }
      return 0;
    }
    if (synth->parsed()) {
      using namespace cxlpredict;
      WorkloadSpec spec = load_workload_spec(spec_path);
      TraceBundle bundle = gen_workload(spec, seed);
      write_bundle(bundle, synth_out_dir);
      std::cerr << "wrote " << bundle.samples.size() << " samples, "
                << bundle.traces.size() << " traces to " << synth_out_dir
                << " (kernels: "
                << cxlpredict::kernels::backend_name(
                       cxlpredict::kernels::active_backend())
                << ")\n";
      return 0;
    }
  } catch (const cxlpredict::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
