#pragma once

#include <cassert>
#include <cstdint>
#include <limits>
#include <mutex>
#include <span>
#include <vector>

#include "kcore/graph.hpp"
#include "kcore/report.hpp"

namespace kcore {

// Sentinel for "no estimate received yet"; behaves like an arbitrarily large
// estimate, i.e. it always saturates at the cap.
inline constexpr std::uint32_t kUnknownEstimate = std::numeric_limits<std::uint32_t>::max();

struct Message {
  NodeId sender;
  std::uint32_t estimate;
};

// The refinement step shared by every engine: the largest t <= current_core
// such that at least t of the estimates are >= t. Estimates above the cap
// (kUnknownEstimate included) count as exactly the cap.
template <class EstimateAt>
std::uint32_t compute_index_over(std::size_t count, EstimateAt&& at, std::uint32_t current_core,
                                 std::vector<std::uint32_t>& counts) {
  if (current_core == 0) return 0;
  counts.assign(static_cast<std::size_t>(current_core) + 1, 0);
  for (std::size_t i = 0; i < count; ++i) {
    std::uint32_t e = at(i);
    ++counts[e < current_core ? e : current_core];
  }
  std::uint32_t seen = 0;
  for (std::uint32_t t = current_core; t > 0; --t) {
    seen += counts[t];
    if (seen >= t) return t;
  }
  return 0;
}

std::uint32_t compute_index(std::span<const std::uint32_t> estimates, std::uint32_t current_core);
std::uint32_t compute_index(std::span<const std::uint32_t> estimates, std::uint32_t current_core,
                            std::vector<std::uint32_t>& counts);

namespace detail {
#ifndef NDEBUG
inline thread_local int mailbox_locks_held = 0;
// Deadlock-freedom check: a thread never holds two mailbox locks at once.
struct MailboxLockScope {
  MailboxLockScope() {
    assert(mailbox_locks_held == 0);
    ++mailbox_locks_held;
  }
  ~MailboxLockScope() { --mailbox_locks_held; }
};
#else
struct MailboxLockScope {};
#endif
}  // namespace detail

// Mutex-guarded FIFO mailbox. One per node in the shared-memory engines;
// senders lock per push, the owner drains everything under one lock.
class MessageMail {
 public:
  void push(const Message& m) {
    [[maybe_unused]] detail::MailboxLockScope scope;
    std::lock_guard<std::mutex> lk(mutex_);
    queue_.push_back(m);
  }

  // Applies fn to every queued message in arrival order, then clears.
  // Returns the number drained. fn must not touch another mailbox.
  template <class Fn>
  std::size_t drain(Fn&& fn) {
    [[maybe_unused]] detail::MailboxLockScope scope;
    std::lock_guard<std::mutex> lk(mutex_);
    for (const Message& m : queue_) fn(m);
    std::size_t drained = queue_.size();
    queue_.clear();
    return drained;
  }

  bool empty() const {
    [[maybe_unused]] detail::MailboxLockScope scope;
    std::lock_guard<std::mutex> lk(mutex_);
    return queue_.empty();
  }

 private:
  mutable std::mutex mutex_;
  std::vector<Message> queue_;
};

struct SequentialKOptions {
  // Neighbor-estimate table layout: flat slices aligned with the adjacency
  // structure, or one hash map per node.
  bool sorted_neighbors = true;
};

// Single-threaded reference engine: plain message rounds, no synchronization.
// Estimates start at the degree and only decrease; terminates on the first
// round that changes nothing.
EngineResult sequentialk_run(const Graph& g, const SequentialKOptions& options = {},
                             const Instrumentation* instr = nullptr);

}  // namespace kcore
