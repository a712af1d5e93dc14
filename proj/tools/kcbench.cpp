#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "kcore/bench.hpp"

namespace {

// "1,2,4" -> {1,2,4}; nullopt on any non-positive or junk entry.
std::optional<std::vector<std::uint64_t>> parse_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::uint64_t value = 0;
    const char* b = text.data() + pos;
    const char* e = text.data() + comma;
    auto [ptr, ec] = std::from_chars(b, e, value);
    if (ec != std::errc() || ptr != e || value == 0) return std::nullopt;
    out.push_back(value);
    pos = comma + 1;
    if (comma == text.size()) break;
  }
  if (out.empty()) return std::nullopt;
  return out;
}

int usage_error(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-core decomposition toolkit: engines, oracle, benchmarks"};
  app.require_subcommand(1);

  kcore::BenchConfig cfg;
  std::string algo = "fastk";
  std::string strategy = "dedicated";
  std::string threads = "16";
  std::string batch = "256";
  std::string format = "csv";
  std::string out_path;
  std::string axis;
  std::string data_dir = "data";
  bool no_verify = false;
  bool skip_check = false;
  bool fetch_all = false;
  std::vector<std::string> names;

  auto add_engine_opts = [&](CLI::App* sc) {
    sc->add_option("--input,-i", cfg.input, "edge-list file (.txt or .txt.gz)")->required();
    sc->add_option("--algo,-a", algo, "oracle | sequentialk | parallelk | fastk");
    sc->add_option("--strategy,-s", strategy, "data-parallel | task-pool | dedicated");
    sc->add_option("--threads,-t", threads, "thread count (comma list for sweeps)");
    sc->add_option("--batch,-b", batch, "batch size (comma list for batch sweeps)");
    sc->add_option("--reps,-r", cfg.reps, "repetitions per configuration");
    sc->add_flag("--no-verify", no_verify, "skip the oracle comparison");
    sc->add_option("--sorted-neighbors", cfg.sorted_neighbors,
                   "flat sorted estimate tables instead of hash maps");
    sc->add_option("--single-round", cfg.single_round, "fuse process and send phases (parallelk)");
    sc->add_option("--selective-send", cfg.selective_send,
                   "suppress messages the receiver provably ignores (parallelk)");
    sc->add_option("--extended-notify", cfg.extended_notify,
                   "stricter neighbor reactivation test (fastk)");
    sc->add_option("--hybrid-tail", cfg.hybrid_tail,
                   "finish on one thread once the active set is small (fastk)");
    sc->add_flag("--trace-convergence", cfg.trace_convergence,
                 "record per-iteration mean error and active fraction");
    sc->add_flag("--count-messages", cfg.count_messages, "emit message counters in the CSV");
    sc->add_option("--out,-o", out_path, "output file (default stdout)");
    sc->add_option("--format", format, "output format")->check(CLI::IsMember({"csv"}));
    sc->add_option("--dump", cfg.dump_coreness, "write node,coreness CSV here");
    sc->add_option("--mismatch-report", cfg.mismatch_report,
                   "mismatch report path (default <graph>.mismatches.csv)");
  };

  CLI::App* c_run = app.add_subcommand("run", "time an engine, R repetitions, CSV rows");
  add_engine_opts(c_run);
  CLI::App* c_sweep = app.add_subcommand("sweep", "run over a threads or batch axis");
  add_engine_opts(c_sweep);
  c_sweep->add_option("--axis", axis, "threads | batch")
      ->required()
      ->check(CLI::IsMember({"threads", "batch"}));
  CLI::App* c_trace = app.add_subcommand("trace", "per-iteration convergence CSV");
  add_engine_opts(c_trace);
  CLI::App* c_verify = app.add_subcommand("verify", "compare one engine run to the oracle");
  add_engine_opts(c_verify);
  CLI::App* c_fetch = app.add_subcommand("fetch", "download published datasets");
  c_fetch->add_option("names", names, "dataset names (none: list status)");
  c_fetch->add_flag("--all", fetch_all, "fetch every dataset in the manifest");
  c_fetch->add_option("--data-dir", data_dir, "target directory (default data)");
  c_fetch->add_flag("--skip-check", skip_check, "skip the post-download count check");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  if (c_fetch->parsed()) {
    if (fetch_all) {
      names.clear();
      for (const kcore::DatasetSpec& d : kcore::dataset_manifest())
        names.emplace_back(d.name);
    }
    return kcore::cmd_fetch(names, data_dir, skip_check, std::cerr);
  }

  auto parsed_algo = kcore::parse_algo(algo);
  if (!parsed_algo) return usage_error("unknown algorithm '" + algo + "'");
  cfg.algo = *parsed_algo;
  auto parsed_strategy = kcore::parse_strategy(strategy);
  if (!parsed_strategy) return usage_error("unknown strategy '" + strategy + "'");
  cfg.strategy = *parsed_strategy;
  cfg.verify = !no_verify;
  if (cfg.reps == 0) return usage_error("--reps must be >= 1");

  auto thread_list = parse_list(threads);
  if (!thread_list) return usage_error("bad --threads list '" + threads + "'");
  auto batch_list = parse_list(batch);
  if (!batch_list) return usage_error("bad --batch list '" + batch + "'");

  const bool sweep = c_sweep->parsed();
  const bool threads_axis = sweep && axis == "threads";
  const bool batch_axis = sweep && axis == "batch";
  if (!threads_axis && thread_list->size() != 1)
    return usage_error("--threads takes one value here (lists are for sweep --axis threads)");
  if (!batch_axis && batch_list->size() != 1)
    return usage_error("--batch takes one value here (lists are for sweep --axis batch)");
  cfg.threads = static_cast<unsigned>(thread_list->front());
  cfg.batch = static_cast<std::uint32_t>(batch_list->front());

  std::ofstream out_file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    out_file.open(out_path);
    if (!out_file) {
      std::cerr << "error: cannot open " << out_path << " for writing\n";
      return 2;
    }
    out = &out_file;
  }

  if (c_run->parsed()) return kcore::cmd_run(cfg, *out, std::cerr);
  if (c_sweep->parsed())
    return kcore::cmd_sweep(cfg, axis, threads_axis ? *thread_list : *batch_list, *out, std::cerr);
  if (c_trace->parsed()) return kcore::cmd_trace(cfg, *out, std::cerr);
  if (c_verify->parsed()) return kcore::cmd_verify(cfg, std::cerr);
  return usage_error("no subcommand");
}
