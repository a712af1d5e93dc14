#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "kcore/graph.hpp"
#include "kcore/kernel.hpp"

namespace kcore {

// Per-node tables of the latest estimate heard from each neighbor. Two
// layouts with one interface:
//   entry(u, sender)            slot for (u <- sender), created at unknown
//   known(u, pos, v)            current entry for neighbor v = neighbors(u)[pos]
//   recompute(u, cap, scratch)  compute_index over u's table
// Rows are only ever touched by u's current owner, so no locking here.

class SortedEstimateStore {
 public:
  explicit SortedEstimateStore(const Graph& g)
      : g_(&g), slots_(g.offsets().back(), kUnknownEstimate) {}

  std::uint32_t* entry(NodeId u, NodeId sender) {
    auto nb = g_->neighbors(u);
    auto it = std::lower_bound(nb.begin(), nb.end(), sender);
    assert(it != nb.end() && *it == sender);
    return &slots_[g_->offsets()[u] + static_cast<std::size_t>(it - nb.begin())];
  }

  std::uint32_t known(NodeId u, std::size_t pos, NodeId v) const {
    assert(g_->neighbors(u)[pos] == v);
    (void)v;
    return slots_[g_->offsets()[u] + pos];
  }

  std::uint32_t recompute(NodeId u, std::uint32_t cap, std::vector<std::uint32_t>& counts) const {
    const std::uint32_t* row = slots_.data() + g_->offsets()[u];
    return compute_index_over(g_->degree(u), [row](std::size_t i) { return row[i]; }, cap, counts);
  }

 private:
  const Graph* g_;
  std::vector<std::uint32_t> slots_;  // aligned with the adjacency slices
};

class HashEstimateStore {
 public:
  explicit HashEstimateStore(const Graph& g) : g_(&g), maps_(g.node_count()) {}

  std::uint32_t* entry(NodeId u, NodeId sender) {
    auto [it, inserted] = maps_[u].try_emplace(sender, kUnknownEstimate);
    return &it->second;
  }

  std::uint32_t known(NodeId u, std::size_t, NodeId v) const {
    auto it = maps_[u].find(v);
    return it == maps_[u].end() ? kUnknownEstimate : it->second;
  }

  std::uint32_t recompute(NodeId u, std::uint32_t cap, std::vector<std::uint32_t>& counts) const {
    if (cap == 0) return 0;
    counts.assign(static_cast<std::size_t>(cap) + 1, 0);
    for (auto [sender, e] : maps_[u]) ++counts[e < cap ? e : cap];
    counts[cap] += g_->degree(u) - static_cast<std::uint32_t>(maps_[u].size());  // silent nbrs
    std::uint32_t seen = 0;
    for (std::uint32_t t = cap; t > 0; --t) {
      seen += counts[t];
      if (seen >= t) return t;
    }
    return 0;
  }

 private:
  const Graph* g_;
  std::vector<std::unordered_map<NodeId, std::uint32_t>> maps_;
};

}  // namespace kcore
