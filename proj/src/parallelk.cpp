#include "kcore/parallelk.hpp"

#include <atomic>
#include <barrier>
#include <cstddef>
#include <stdexcept>
#include <thread>

#include "kcore/estimate_store.hpp"
#include "kcore/kernel.hpp"
#include "worker_pool.hpp"

namespace kcore {

namespace {

struct ThreadLocalState {
  std::vector<std::uint32_t> counts;
  std::uint64_t sent = 0;
  std::uint64_t drained = 0;
};

// Shared run state plus the per-node step functions. Any node is touched by
// at most one thread per phase (batch claims are disjoint), so core, changed
// and the estimate rows need no locks; only the mailboxes are contended.
template <class Store>
struct Engine {
  const Graph& g;
  const ParallelKOptions& opt;
  const Instrumentation* instr;
  const std::uint32_t n;

  std::vector<std::uint32_t> core;
  Store store;
  std::vector<MessageMail> mail;
  std::vector<std::uint8_t> changed;
  EngineResult out;

  Engine(const Graph& graph, const ParallelKOptions& options, const Instrumentation* ins)
      : g(graph),
        opt(options),
        instr(ins),
        n(graph.node_count()),
        core(n),
        store(graph),
        mail(n),
        changed(n, 0) {
    for (NodeId u = 0; u < n; ++u) core[u] = g.degree(u);
  }

  void deliver_init() {
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v : g.neighbors(u)) mail[v].push({u, core[u]});
      out.report.messages_sent += g.degree(u);
    }
  }

  std::uint64_t active_now() const {
    if (instr == nullptr) return 0;
    std::uint64_t active = 0;
    for (NodeId u = 0; u < n; ++u) active += !mail[u].empty();
    return active;
  }

  void boundary_row(std::uint64_t iteration) {
    instrument_boundary(out.report, instr, iteration, core, active_now());
  }

  bool process_node(NodeId u, ThreadLocalState& local) {
    bool lowered = false;
    local.drained += mail[u].drain([&](const Message& m) {
      std::uint32_t* slot = store.entry(u, m.sender);
      if (m.estimate < *slot) {
        *slot = m.estimate;
        lowered = true;
      }
    });
    if (!lowered) return false;
    std::uint32_t t = store.recompute(u, core[u], local.counts);
    if (t >= core[u]) return false;
    core[u] = t;
    return true;
  }

  void send_from(NodeId u, ThreadLocalState& local) {
    auto nb = g.neighbors(u);
    const std::uint32_t c = core[u];
    for (std::size_t i = 0; i < nb.size(); ++i) {
      NodeId v = nb[i];
      if (opt.selective_send && c >= store.known(u, i, v)) continue;
      mail[v].push({u, c});
      ++local.sent;
    }
  }

  void finish(std::span<ThreadLocalState> locals) {
    for (const ThreadLocalState& l : locals) {
      out.report.messages_sent += l.sent;
      out.report.messages_drained += l.drained;
    }
    out.result = make_coreness_result(std::move(core));
  }
};

// DataParallelLoop and TaskPool: one fork-join dispatch per phase on a
// persistent pool; the iteration boundary runs on the calling thread.
template <class Store>
EngineResult run_forkjoin(const Graph& g, const ParallelKOptions& opt,
                          const Instrumentation* instr) {
  Engine<Store> e(g, opt, instr);
  e.deliver_init();
  e.boundary_row(0);

  const std::uint64_t n = e.n;
  const std::uint64_t batch = opt.batch;
  std::vector<ThreadLocalState> locals(opt.threads);
  std::atomic<std::uint64_t> cursor{0};
  std::atomic<bool> any{false};
  detail::WorkerPool pool(opt.threads);

  auto for_nodes = [&](auto&& body) {
    if (opt.strategy == Strategy::DataParallelLoop) {
      pool.run([&](unsigned tid) {
        std::uint64_t lo = n * tid / opt.threads;
        std::uint64_t hi = n * (tid + 1) / opt.threads;
        if (lo < hi) body(tid, lo, hi);
      });
    } else {
      cursor.store(0, std::memory_order_relaxed);
      pool.run([&](unsigned tid) {
        for (;;) {
          std::uint64_t lo = cursor.fetch_add(batch, std::memory_order_relaxed);
          if (lo >= n) break;
          body(tid, lo, std::min(lo + batch, n));
        }
      });
    }
  };

  for (;;) {
    any.store(false, std::memory_order_relaxed);
    if (opt.single_round) {
      for_nodes([&](unsigned tid, std::uint64_t lo, std::uint64_t hi) {
        bool local_any = false;
        for (std::uint64_t u = lo; u < hi; ++u)
          if (e.process_node(static_cast<NodeId>(u), locals[tid])) {
            e.send_from(static_cast<NodeId>(u), locals[tid]);
            local_any = true;
          }
        if (local_any) any.store(true, std::memory_order_relaxed);
      });
    } else {
      for_nodes([&](unsigned tid, std::uint64_t lo, std::uint64_t hi) {
        bool local_any = false;
        for (std::uint64_t u = lo; u < hi; ++u)
          if (e.process_node(static_cast<NodeId>(u), locals[tid])) {
            e.changed[u] = 1;
            local_any = true;
          }
        if (local_any) any.store(true, std::memory_order_relaxed);
      });
      for_nodes([&](unsigned tid, std::uint64_t lo, std::uint64_t hi) {
        for (std::uint64_t u = lo; u < hi; ++u)
          if (e.changed[u]) {
            e.send_from(static_cast<NodeId>(u), locals[tid]);
            e.changed[u] = 0;
          }
      });
    }
    ++e.out.report.iterations;
    e.boundary_row(e.out.report.iterations);
    if (!any.load(std::memory_order_relaxed)) break;
  }

  e.finish(locals);
  return std::move(e.out);
}

// DedicatedWorkers: T workers plus the calling thread as coordinator, stepped
// by one barrier whose completion slot does the serial iteration-boundary
// work (reset cursors, latch and clear the continue flag) while every party
// is still blocked. Two waits per iteration in two-phase mode, one when
// single_round fuses the phases.
template <class Store>
EngineResult run_dedicated(const Graph& g, const ParallelKOptions& opt,
                           const Instrumentation* instr) {
  Engine<Store> e(g, opt, instr);
  e.deliver_init();
  e.boundary_row(0);

  const std::uint64_t n = e.n;
  const std::uint64_t batch = opt.batch;
  const unsigned T = opt.threads;
  std::vector<ThreadLocalState> locals(T);

  std::atomic<std::uint64_t> proc_cursor{0};
  std::atomic<std::uint64_t> send_cursor{0};
  std::atomic<bool> go_on{false};
  bool cont = true;     // written only in the completion slot
  bool at_mid = true;   // two-phase: completions alternate MID, END

  auto boundary = [&]() noexcept {
    ++e.out.report.iterations;
    cont = go_on.load(std::memory_order_relaxed);
    go_on.store(false, std::memory_order_relaxed);
    proc_cursor.store(0, std::memory_order_relaxed);
    send_cursor.store(0, std::memory_order_relaxed);
    e.boundary_row(e.out.report.iterations);
  };
  std::barrier bar(T + 1, [&]() noexcept {
    if (opt.single_round) {
      boundary();
    } else if (at_mid) {
      at_mid = false;
    } else {
      boundary();
      at_mid = true;
    }
  });

  auto claim = [&](std::atomic<std::uint64_t>& cursor, auto&& body) {
    for (;;) {
      std::uint64_t lo = cursor.fetch_add(batch, std::memory_order_relaxed);
      if (lo >= n) break;
      std::uint64_t hi = std::min(lo + batch, n);
      for (std::uint64_t u = lo; u < hi; ++u) body(static_cast<NodeId>(u));
    }
  };

  auto worker = [&](unsigned tid) {
    ThreadLocalState& local = locals[tid];
    for (;;) {
      bool local_any = false;
      if (opt.single_round) {
        claim(proc_cursor, [&](NodeId u) {
          if (e.process_node(u, local)) {
            e.send_from(u, local);
            local_any = true;
          }
        });
        if (local_any) go_on.store(true, std::memory_order_relaxed);
        bar.arrive_and_wait();
      } else {
        claim(proc_cursor, [&](NodeId u) {
          if (e.process_node(u, local)) {
            e.changed[u] = 1;
            local_any = true;
          }
        });
        if (local_any) go_on.store(true, std::memory_order_relaxed);
        bar.arrive_and_wait();  // MID: process results now visible to senders
        claim(send_cursor, [&](NodeId u) {
          if (e.changed[u]) {
            e.send_from(u, local);
            e.changed[u] = 0;
          }
        });
        bar.arrive_and_wait();  // END: completion slot ran the boundary
      }
      if (!cont) break;
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(T);
  for (unsigned t = 0; t < T; ++t) threads.emplace_back(worker, t);
  for (;;) {
    bar.arrive_and_wait();
    if (!opt.single_round) bar.arrive_and_wait();
    if (!cont) break;
  }
  for (std::thread& t : threads) t.join();

  e.finish(locals);
  return std::move(e.out);
}

template <class Store>
EngineResult run_with_store(const Graph& g, const ParallelKOptions& opt,
                            const Instrumentation* instr) {
  return opt.strategy == Strategy::DedicatedWorkers ? run_dedicated<Store>(g, opt, instr)
                                                    : run_forkjoin<Store>(g, opt, instr);
}

}  // namespace

EngineResult parallelk_run(const Graph& g, const ParallelKOptions& options,
                           const Instrumentation* instr) {
  if (options.threads == 0) throw std::invalid_argument("parallelk: threads must be >= 1");
  if (options.batch == 0) throw std::invalid_argument("parallelk: batch must be >= 1");
  return options.sorted_neighbors ? run_with_store<SortedEstimateStore>(g, options, instr)
                                  : run_with_store<HashEstimateStore>(g, options, instr);
}

}  // namespace kcore
