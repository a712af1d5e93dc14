#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "kcore/oracle.hpp"

namespace kcore {

struct IterationStat {
  double mean_error;      // mean over nodes of (estimate - true coreness)
  double active_fraction; // nodes with pending work / node count
};

struct RunReport {
  std::uint64_t iterations = 0;        // executed rounds, final quiescent one included
  std::uint64_t messages_sent = 0;     // initialization messages included
  std::uint64_t messages_drained = 0;
  std::uint64_t tail_pops = 0;         // sequential-tail queue pops (hybrid engine only)
  std::vector<IterationStat> trace;    // filled when convergence tracing is on
};

struct EngineResult {
  CorenessResult result;
  RunReport report;
};

// Optional per-run observation. Engines invoke the hooks at iteration
// boundaries only, from a single thread while all workers are quiescent:
// once after initialization (iteration 0) and once after each executed round.
struct Instrumentation {
  const CorenessResult* truth = nullptr;  // required when trace_convergence is set
  bool trace_convergence = false;
  std::function<void(std::uint64_t iteration, std::span<const std::uint32_t> estimates,
                     std::uint64_t active_count)>
      inspector;
};

// Append one trace row: mean positive gap to the truth and the active share.
void record_iteration(RunReport& report, std::span<const std::uint32_t> estimates,
                      const CorenessResult& truth, std::uint64_t active_count);

// Engines call this at each boundary; dispatches to trace and inspector.
void instrument_boundary(RunReport& report, const Instrumentation* instr,
                         std::uint64_t iteration, std::span<const std::uint32_t> estimates,
                         std::uint64_t active_count);

}  // namespace kcore
