#pragma once

#include <cstdint>

#include "kcore/graph.hpp"
#include "kcore/report.hpp"

namespace kcore {

// How node batches reach the threads. All three compute identical results;
// they differ only in scheduling overhead.
enum class Strategy {
  DataParallelLoop,  // per-phase fork over static index ranges
  TaskPool,          // per-phase fork, batches claimed from a shared cursor
  DedicatedWorkers,  // persistent workers, barrier-stepped; the reference
};

struct ParallelKOptions {
  Strategy strategy = Strategy::DedicatedWorkers;
  unsigned threads = 16;
  std::uint32_t batch = 256;   // nodes claimed per cursor fetch
  bool sorted_neighbors = true;
  bool single_round = false;   // fuse drain/recompute/send into one phase
  bool selective_send = false; // drop messages the receiver provably ignores
};

// Message-passing engine over shared memory: per-node locked mailboxes,
// estimates flow only through messages. Bulk-synchronous; terminates on the
// first round in which no estimate drops. Throws std::invalid_argument for
// zero threads or batch before any thread starts.
EngineResult parallelk_run(const Graph& g, const ParallelKOptions& options = {},
                           const Instrumentation* instr = nullptr);

}  // namespace kcore
