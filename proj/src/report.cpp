#include "kcore/report.hpp"

#include <cassert>

namespace kcore {

void record_iteration(RunReport& report, std::span<const std::uint32_t> estimates,
                      const CorenessResult& truth, std::uint64_t active_count) {
  assert(estimates.size() == truth.coreness.size());
  const std::size_t n = estimates.size();
  double gap = 0.0;
  for (std::size_t u = 0; u < n; ++u)
    gap += static_cast<double>(estimates[u]) - static_cast<double>(truth.coreness[u]);
  IterationStat row;
  row.mean_error = n == 0 ? 0.0 : gap / static_cast<double>(n);
  row.active_fraction = n == 0 ? 0.0 : static_cast<double>(active_count) / static_cast<double>(n);
  report.trace.push_back(row);
}

void instrument_boundary(RunReport& report, const Instrumentation* instr,
                         std::uint64_t iteration, std::span<const std::uint32_t> estimates,
                         std::uint64_t active_count) {
  if (instr == nullptr) return;
  if (instr->trace_convergence) {
    assert(instr->truth != nullptr);
    record_iteration(report, estimates, *instr->truth, active_count);
  }
  if (instr->inspector) instr->inspector(iteration, estimates, active_count);
}

}  // namespace kcore
