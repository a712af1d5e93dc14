#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kcore/fastk.hpp"
#include "kcore/kernel.hpp"
#include "kcore/parallelk.hpp"

namespace kcore {

enum class Algo { Oracle, SequentialK, ParallelK, FastK };

std::string_view algo_name(Algo a);
std::optional<Algo> parse_algo(std::string_view name);
std::string_view strategy_name(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view name);

struct BenchConfig {
  std::string input;
  Algo algo = Algo::FastK;
  Strategy strategy = Strategy::DedicatedWorkers;
  unsigned threads = 16;
  std::uint32_t batch = 256;
  unsigned reps = 5;
  bool sorted_neighbors = true;
  bool single_round = false;
  bool selective_send = false;
  bool extended_notify = true;
  bool hybrid_tail = true;
  bool verify = true;
  bool trace_convergence = false;  // perturbs timing; rows are flagged
  bool count_messages = false;
  std::string dump_coreness;       // write "node,coreness" here if non-empty
  std::string mismatch_report;     // default "<graph>.mismatches.csv"
};

// Timing covers exactly one engine invocation: thread setup included, graph
// loading and oracle precomputation excluded.
struct TimedRun {
  double seconds = 0.0;
  EngineResult engine;
};
TimedRun run_engine_once(const Graph& g, const BenchConfig& cfg, const Instrumentation* instr);

void write_csv_header(std::ostream& out);
// One row per repetition; rep is the 0-based index, or "mean" for aggregates.
void write_csv_row(std::ostream& out, const BenchConfig& cfg, std::string_view graph_name,
                   std::string_view rep, double seconds, const RunReport& report,
                   std::uint32_t k_max, std::string_view verified, double speedup);

// Subcommand drivers. Return the process exit code: 0 ok, 2 I/O error,
// 3 verification mismatch (usage errors are rejected by the CLI as 1).
int cmd_run(const BenchConfig& cfg, std::ostream& csv, std::ostream& log);
int cmd_sweep(const BenchConfig& cfg, const std::string& axis,
              std::span<const std::uint64_t> values, std::ostream& csv, std::ostream& log);
int cmd_trace(const BenchConfig& cfg, std::ostream& trace_csv, std::ostream& log);
int cmd_verify(const BenchConfig& cfg, std::ostream& log);
int cmd_fetch(std::span<const std::string> names, const std::string& data_dir, bool skip_check,
              std::ostream& log);

struct DatasetSpec {
  std::string_view name;     // canonical name used on the command line
  std::string_view archive;  // file name on the dataset host
  std::uint64_t nodes;       // published counts; arcs for directed sources
  std::uint64_t edges;
  std::uint32_t k_max;
  bool ci;                   // desk-scale continuous-integration subset
};

std::span<const DatasetSpec> dataset_manifest();
const DatasetSpec* find_dataset(std::string_view name);
std::string dataset_path(const std::string& data_dir, const DatasetSpec& d);

}  // namespace kcore
