#include "kcore/fastk.hpp"

#include <barrier>
#include <queue>
#include <stdexcept>
#include <thread>
#include <utility>

#include "kcore/kernel.hpp"

namespace kcore {

namespace {

std::uint32_t recompute_node(const Graph& g, const std::vector<std::uint32_t>& est, NodeId u,
                             std::uint32_t cap, std::vector<std::uint32_t>& counts) {
  auto nb = g.neighbors(u);
  return compute_index_over(
      nb.size(), [&](std::size_t i) { return est[nb[i]]; }, cap, counts);
}

bool useful(std::uint32_t new_core, std::uint32_t old_core, std::uint32_t est_v, bool extended) {
  return extended ? should_notify(new_core, old_core, est_v) : est_v > new_core;
}

}  // namespace

void sequential_tail(const Graph& g, std::vector<std::uint32_t>& est, ActiveFlags& active,
                     bool extended_notify, RunReport& report) {
  using Entry = std::pair<std::uint32_t, NodeId>;  // (estimate at push, node)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> queue;
  for (NodeId u = 0; u < g.node_count(); ++u)
    if (active[u].load(std::memory_order_relaxed)) queue.push({est[u], u});

  std::vector<std::uint32_t> counts;
  while (!queue.empty()) {
    auto [key, u] = queue.top();
    queue.pop();
    ++report.tail_pops;
    if (!active[u].load(std::memory_order_relaxed)) continue;  // stale entry
    active[u].store(0, std::memory_order_relaxed);
    ++report.messages_drained;
    const std::uint32_t cap = est[u];
    std::uint32_t t = recompute_node(g, est, u, cap, counts);
    if (t >= cap) continue;
    est[u] = t;
    for (NodeId v : g.neighbors(u)) {
      std::uint32_t ev = est[v];
      if (!useful(t, cap, ev, extended_notify)) continue;
      active[v].store(1, std::memory_order_relaxed);
      queue.push({ev, v});  // re-push refreshes the key; old entries go stale
      ++report.messages_sent;
    }
  }
}

EngineResult fastk_run(const Graph& g, const FastKOptions& opt, const Instrumentation* instr) {
  if (opt.threads == 0) throw std::invalid_argument("fastk: threads must be >= 1");
  if (opt.batch == 0) throw std::invalid_argument("fastk: batch must be >= 1");

  const std::uint32_t n = g.node_count();
  const unsigned T = opt.threads;
  const std::uint64_t batch = opt.batch;
  EngineResult out;
  RunReport& rep = out.report;

  std::vector<std::uint32_t> est(n);
  for (NodeId u = 0; u < n; ++u) est[u] = g.degree(u);
  ActiveFlags active(n);
  for (NodeId u = 0; u < n; ++u) active[u].store(1, std::memory_order_relaxed);

  std::atomic<std::uint64_t> cursor{0};
  std::atomic<bool> changed{false};
  std::atomic<std::int64_t> active_count{n};
  bool cont = true;          // both written only in the completion slot
  bool tail_pending = false;
  unsigned phase = 0;

  struct Pending {
    NodeId v;
    std::uint32_t new_core;
    std::uint32_t old_core;
  };
  struct Local {
    std::vector<std::pair<NodeId, std::uint32_t>> updates;
    std::vector<Pending> pending;
    std::vector<std::uint32_t> counts;
    std::uint64_t notified = 0;
    std::uint64_t processed = 0;
  };
  std::vector<Local> locals(T);

  instrument_boundary(rep, instr, 0, est, n);

  // Iteration = process | apply | notify | END(completion). Notification
  // candidates are judged against the settled estimates of the round, not the
  // snapshot: when two adjacent nodes drop past each other in one round, the
  // snapshot view of either side can claim the other never counted it and
  // leave a node inactive with a stale value. The completion slot is the
  // leader: it resets changed and the cursor, reads the exact active count,
  // and decides between next iteration, tail, and termination.
  std::barrier bar(T, [&]() noexcept {
    phase = (phase + 1) % 3;
    if (phase != 0) return;
    ++rep.iterations;
    cursor.store(0, std::memory_order_relaxed);
    const bool ch = changed.exchange(false, std::memory_order_relaxed);
    const auto ac = static_cast<std::uint64_t>(active_count.load(std::memory_order_relaxed));
    instrument_boundary(rep, instr, rep.iterations, est, ac);
    if (!ch) {
      cont = false;
    } else if (opt.hybrid_tail && switch_condition(ac, opt.batch)) {
      tail_pending = true;
      cont = false;
    } else {
      cont = true;
    }
  });

  auto worker = [&](unsigned tid) {
    Local& local = locals[tid];
    for (;;) {
      local.updates.clear();
      local.pending.clear();
      bool local_changed = false;
      std::int64_t delta = 0;

      for (;;) {  // process: read-only over est, claims deactivate
        std::uint64_t lo = cursor.fetch_add(batch, std::memory_order_relaxed);
        if (lo >= n) break;
        std::uint64_t hi = std::min(lo + batch, static_cast<std::uint64_t>(n));
        for (std::uint64_t i = lo; i < hi; ++i) {
          auto u = static_cast<NodeId>(i);
          if (!active[u].load(std::memory_order_relaxed)) continue;
          active[u].store(0, std::memory_order_relaxed);
          --delta;
          ++local.processed;
          const std::uint32_t cap = est[u];
          std::uint32_t t = recompute_node(g, est, u, cap, local.counts);
          if (t >= cap) continue;
          local.updates.emplace_back(u, t);
          local_changed = true;
          for (NodeId v : g.neighbors(u)) {
            // Snapshot pre-filter only; settled values can only be lower, so
            // anything failing the plain guard here can never fire below.
            if (est[v] > t) local.pending.push_back({v, t, cap});
          }
        }
      }
      if (local_changed) changed.store(true, std::memory_order_relaxed);
      bar.arrive_and_wait();  // snapshot frozen, writes may begin

      for (auto [u, c] : local.updates) est[u] = c;
      bar.arrive_and_wait();  // estimates settled

      for (const Pending& p : local.pending) {
        bool fire = opt.extended_notify ? should_notify(p.new_core, p.old_core, est[p.v])
                                        : est[p.v] > p.new_core;
        if (!fire) continue;
        ++local.notified;
        if (active[p.v].exchange(1, std::memory_order_relaxed) == 0) ++delta;
      }
      active_count.fetch_add(delta, std::memory_order_relaxed);
      bar.arrive_and_wait();  // END

      if (!cont) break;
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(T);
  for (unsigned t = 0; t < T; ++t) threads.emplace_back(worker, t);
  for (std::thread& t : threads) t.join();

  for (const Local& l : locals) {
    rep.messages_sent += l.notified;
    rep.messages_drained += l.processed;
  }

  if (tail_pending) {
    sequential_tail(g, est, active, opt.extended_notify, rep);
    instrument_boundary(rep, instr, rep.iterations + 1, est, 0);
  }

  out.result = make_coreness_result(std::move(est));
  return out;
}

}  // namespace kcore
