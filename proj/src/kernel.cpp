#include "kcore/kernel.hpp"

#include "kcore/estimate_store.hpp"

namespace kcore {

std::uint32_t compute_index(std::span<const std::uint32_t> estimates, std::uint32_t current_core,
                            std::vector<std::uint32_t>& counts) {
  return compute_index_over(
      estimates.size(), [estimates](std::size_t i) { return estimates[i]; }, current_core, counts);
}

std::uint32_t compute_index(std::span<const std::uint32_t> estimates, std::uint32_t current_core) {
  std::vector<std::uint32_t> counts;
  return compute_index(estimates, current_core, counts);
}

namespace {

template <class Store>
EngineResult run_sequential(const Graph& g, const Instrumentation* instr) {
  const std::uint32_t n = g.node_count();
  EngineResult out;
  RunReport& rep = out.report;

  std::vector<std::uint32_t> core(n);
  for (NodeId u = 0; u < n; ++u) core[u] = g.degree(u);
  Store store(g);
  std::vector<std::vector<Message>> mail(n);
  std::vector<std::uint8_t> changed(n, 0);
  std::vector<std::uint32_t> counts;

  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v : g.neighbors(u)) mail[v].push_back({u, core[u]});
    rep.messages_sent += g.degree(u);
  }

  // Pending-mail scan is instrumentation-only; unobserved runs skip it.
  auto active_now = [&]() -> std::uint64_t {
    if (instr == nullptr) return 0;
    std::uint64_t active = 0;
    for (NodeId u = 0; u < n; ++u) active += !mail[u].empty();
    return active;
  };
  instrument_boundary(rep, instr, 0, core, active_now());

  for (;;) {
    bool any = false;
    for (NodeId u = 0; u < n; ++u) {
      if (mail[u].empty()) continue;
      bool lowered = false;
      for (const Message& m : mail[u]) {
        std::uint32_t* slot = store.entry(u, m.sender);
        if (m.estimate < *slot) {
          *slot = m.estimate;
          lowered = true;
        }
      }
      rep.messages_drained += mail[u].size();
      mail[u].clear();
      if (!lowered) continue;
      std::uint32_t t = store.recompute(u, core[u], counts);
      if (t < core[u]) {
        core[u] = t;
        changed[u] = 1;
        any = true;
      }
    }
    if (any) {
      for (NodeId u = 0; u < n; ++u) {
        if (!changed[u]) continue;
        for (NodeId v : g.neighbors(u)) mail[v].push_back({u, core[u]});
        rep.messages_sent += g.degree(u);
        changed[u] = 0;
      }
    }
    ++rep.iterations;
    instrument_boundary(rep, instr, rep.iterations, core, active_now());
    if (!any) break;
  }

  out.result = make_coreness_result(std::move(core));
  return out;
}

}  // namespace

EngineResult sequentialk_run(const Graph& g, const SequentialKOptions& options,
                             const Instrumentation* instr) {
  return options.sorted_neighbors ? run_sequential<SortedEstimateStore>(g, instr)
                                  : run_sequential<HashEstimateStore>(g, instr);
}

}  // namespace kcore
