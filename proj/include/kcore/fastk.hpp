#pragma once

#include <atomic>
#include <cstdint>
#include <vector>

#include "kcore/graph.hpp"
#include "kcore/report.hpp"

namespace kcore {

struct FastKOptions {
  unsigned threads = 16;
  std::uint32_t batch = 256;  // nodes claimed per cursor fetch
  // Notify a neighbor only if the drop is visible to it: newCore < est(v)
  // and the previous value was not already below est(v). Off falls back to
  // the plain est(v) > newCore guard.
  bool extended_notify = true;
  // Once fewer than batch nodes stay active, finish on one thread with a
  // min-priority queue instead of sweeping all n per iteration.
  bool hybrid_tail = true;
};

// Extended usefulness test for notifying v after u dropped old_core -> new_core.
inline bool should_notify(std::uint32_t new_core, std::uint32_t old_core, std::uint32_t est_v) {
  return new_core < est_v && old_core >= est_v;
}

inline bool switch_condition(std::uint64_t active_count, std::uint32_t batch) {
  return active_count < batch;
}

using ActiveFlags = std::vector<std::atomic<std::uint8_t>>;

// Single-threaded finish: pop active nodes in ascending estimate order (lazy
// deletion for stale entries), recompute, reactivate useful neighbors.
// Requires all workers quiesced. Pops and notifications land in the report.
void sequential_tail(const Graph& g, std::vector<std::uint32_t>& est, ActiveFlags& active,
                     bool extended_notify, RunReport& report);

// Flat-state engine: one global estimate vector read by everyone, per-thread
// update buffers applied in a separate phase, and notification candidates
// judged against the settled values of the round, so an iteration is a pure
// function of the previous one regardless of scheduling. Throws
// std::invalid_argument for zero threads or batch before any thread starts.
EngineResult fastk_run(const Graph& g, const FastKOptions& options = {},
                       const Instrumentation* instr = nullptr);

}  // namespace kcore
